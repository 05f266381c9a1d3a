"""Counting statistics of the two output ports.

Everything here is a pure function of the joint photon-number distribution
P(n1, n2): heralded single-photon statistics and g2(0), threshold-detector
probabilities for the eavesdropping analysis, and squeeze-parameter sweeps
with maximum location.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import NoHeraldError, PcbsError
from .fock import SqueezedInput, TruncationPolicy, output_amplitudes

__all__ = [
    "JointDistribution",
    "HeraldedStats",
    "ThresholdProbs",
    "SweepPoint",
    "SweepResult",
    "joint_distribution",
    "heralded_stats",
    "threshold_probs",
    "sweep_r",
    "locate_maximum",
]


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Joint probabilities ``p[n1, n2]`` of photon counts at the two ports.

    ``captured_mass`` is the total probability inside the truncated block;
    the residual tail is bounded by the policy used to produce it.
    """

    p: np.ndarray
    captured_mass: float
    input_echo: SqueezedInput


@dataclass(frozen=True, eq=False)
class HeraldedStats:
    """Statistics of port b conditioned on exactly one photon at port a.

    ``p1`` is the herald probability P1 = sum_n P(1, n); ``pn`` the
    renormalized conditional distribution P(1, n)/P1; ``g2`` the zero-delay
    second-order correlation <n(n-1)>/<n>^2 of ``pn``.
    """

    p1: float
    pn: np.ndarray
    g2: float


@dataclass(frozen=True)
class ThresholdProbs:
    """Threshold-detector probabilities for the beam-splitting-attack analysis.

    q1: at least one photon at port a (herald fires).
    q2: at least one photon at each port (coincidence).
    q3: at least one photon at port a and exactly one at port b.

    ``baseline_miss`` = q1 - q2 is the joint probability that the herald fires
    but the far detector sees nothing; an eavesdropper splitting off half of
    every photon raises it to ``attacked_miss`` = q1 - q2 + q3/2 (a lone
    photon is stolen outright with probability 1/2).
    """

    q1: float
    q2: float
    q3: float
    baseline_miss: float
    attacked_miss: float


@dataclass(frozen=True)
class SweepPoint:
    """One row of an r-sweep; ``error`` holds the failure text for bad rows."""

    r: float
    p11: float
    p1: float
    pn1: float
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    alpha: float
    points: tuple[SweepPoint, ...]

    def ok_points(self) -> list[SweepPoint]:
        return [pt for pt in self.points if pt.error is None]


def joint_distribution(state: SqueezedInput, policy: TruncationPolicy) -> JointDistribution:
    """Square the output amplitudes into the joint counting distribution."""
    amp = output_amplitudes(state, policy)
    return JointDistribution(p=amp.entries**2, captured_mass=amp.captured_mass,
                             input_echo=state)


def heralded_stats(jd: JointDistribution) -> HeraldedStats:
    """Condition port b on a single-photon herald at port a.

    g2 uses the full conditional vector up to the truncation; the neglected
    tail is bounded by the distribution's tail tolerance.
    """
    row = jd.p[1, :]
    p1 = float(np.sum(row))
    if p1 == 0.0:
        raise NoHeraldError(
            f"herald probability is exactly zero for r={jd.input_echo.r}, "
            f"alpha={jd.input_echo.alpha}"
        )
    pn = row / p1
    n = np.arange(pn.size)
    mean = float(np.sum(n * pn))
    fact2 = float(np.sum(n * (n - 1) * pn))     # <n(n-1)>
    return HeraldedStats(p1=p1, pn=pn, g2=fact2 / mean**2)


def threshold_probs(jd: JointDistribution) -> ThresholdProbs:
    """Probabilities seen by ideal threshold detectors (fire on >= 1 photon)."""
    q1 = float(jd.captured_mass - np.sum(jd.p[0, :]))
    q2 = float(q1 - np.sum(jd.p[1:, 0]))
    q3 = float(np.sum(jd.p[1:, 1]))
    baseline = q1 - q2
    return ThresholdProbs(q1=q1, q2=q2, q3=q3,
                          baseline_miss=baseline,
                          attacked_miss=baseline + 0.5 * q3)


def sweep_r(alpha: float, r_grid, policy: TruncationPolicy) -> SweepResult:
    """Evaluate (P(1,1), P1, pn(1)) across squeeze values.

    pn(1) = P(1,1)/P1 is the heralded single-photon fraction.  Rows whose
    computation fails its truncation or precision check are kept, marked with
    the error text, and filled with NaN; the sweep itself never aborts.
    """
    points = []
    for r in r_grid:
        if r < 0:
            raise ValueError(f"sweep r values must be >= 0, got {r}")
        try:
            jd = joint_distribution(SqueezedInput(r=float(r), alpha=alpha), policy)
        except PcbsError as exc:
            points.append(SweepPoint(r=float(r), p11=math.nan, p1=math.nan,
                                     pn1=math.nan, error=str(exc)))
            continue
        p11 = float(jd.p[1, 1])
        p1 = float(np.sum(jd.p[1, :]))
        pn1 = p11 / p1 if p1 > 0.0 else math.nan
        points.append(SweepPoint(r=float(r), p11=p11, p1=p1, pn1=pn1))
    return SweepResult(alpha=alpha, points=tuple(points))


def locate_maximum(alpha: float, quantity: str, r_lo: float, r_hi: float,
                   policy: TruncationPolicy, coarse: int = 33) -> tuple[float, float]:
    """Maximize P(1,1) or P1 over r in [r_lo, r_hi]; returns (r_star, value).

    A coarse grid brackets the maximum, golden-section search refines it.
    Raises ValueError when the coarse maximum sits on the interval boundary
    (no interior bracket exists).
    """
    if quantity not in ("p11", "p1"):
        raise ValueError(f"quantity must be 'p11' or 'p1', got {quantity!r}")
    if not (0.0 <= r_lo < r_hi):
        raise ValueError("need 0 <= r_lo < r_hi")

    def f(r: float) -> float:
        jd = joint_distribution(SqueezedInput(r=float(r), alpha=alpha), policy)
        return float(jd.p[1, 1]) if quantity == "p11" else float(np.sum(jd.p[1, :]))

    grid = np.linspace(r_lo, r_hi, coarse)
    vals = np.array([f(r) for r in grid])
    i = int(np.argmax(vals))
    if i == 0 or i == coarse - 1:
        raise ValueError(
            f"maximum of {quantity} lies at the boundary of [{r_lo}, {r_hi}]"
        )
    res = minimize_scalar(lambda r: -f(r), bracket=(grid[i - 1], grid[i], grid[i + 1]),
                          method="golden", options={"xtol": 1e-6})
    return float(res.x), float(-res.fun)
