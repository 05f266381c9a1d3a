"""Monte Carlo BB84 sessions fed by the two-port photon source.

Alice heralds a pulse when her port fires (n1 >= 1); Bob's threshold
detector fires when at least one photon reaches him.  An eavesdropper on
the channel routes each of Bob's photons to herself independently with
probability splitting_ratio; only the detection indicator is observable,
so the per-photon routing is sampled through its exact marginal
P(all stolen | n2) = ratio**n2 with a single uniform per pulse.  All random
draws (cell choice, theft, bases) are made for every pulse regardless of
the attack settings, so sessions with the same seed share their randomness
across attack models (common random numbers): the no-attack session and a
splitting_ratio = 0 session are bit-identical, and the miss rate is
pulse-wise monotone in the ratio.

Detection is rate-based: bases are drawn and sifting is counted, but bit
values never influence anything observable (no channel noise, QBER not
modeled) and are not drawn.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import EmptySessionError, NoHeraldError
from .stats import JointDistribution, threshold_probs

__all__ = [
    "AttackModel",
    "Verdict",
    "SessionReport",
    "sample_cells",
    "simulate_session",
    "detect_attack",
    "MIN_HERALDS_FOR_TEST",
]

ATTACK_KINDS = ("none", "balanced_beam_splitter")
MIN_HERALDS_FOR_TEST = 100      # below this the z-test is not trustworthy
_MAX_MISSING_MASS = 1e-6        # sampling precondition on 1 - captured_mass


@dataclass(frozen=True)
class AttackModel:
    """Beam-splitting eavesdropper on Bob's channel."""

    kind: str = "none"
    splitting_ratio: float = 0.5

    def __post_init__(self):
        if self.kind not in ATTACK_KINDS:
            raise ValueError(f"kind must be one of {ATTACK_KINDS}, got {self.kind!r}")
        if not 0.0 <= self.splitting_ratio <= 1.0:
            raise ValueError("splitting_ratio must lie in [0, 1]")

    @property
    def routed_fraction(self) -> float:
        """Per-photon probability of theft; zero when no attack is present."""
        return self.splitting_ratio if self.kind == "balanced_beam_splitter" else 0.0


class Verdict(str, Enum):
    CLEAN = "clean"
    ATTACK_SUSPECTED = "attack_suspected"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SessionReport:
    """Counts and rates of one simulated session.

    bob_detect_count counts heralded pulses in which Bob detected;
    bob_miss_given_herald is the herald-conditioned miss rate and
    bob_miss_joint the per-pulse (joint) one.  sifted_key_bits counts
    heralded, detected pulses where the bases agreed.
    """

    n_pulses: int
    herald_count: int
    bob_detect_count: int
    bob_miss_given_herald: float
    bob_miss_joint: float
    sifted_key_bits: int
    verdict: Verdict
    seed: int
    rng_algorithm: str = "pcg64"

    def to_json(self) -> str:
        return json.dumps(
            {
                "n_pulses": self.n_pulses,
                "herald_count": self.herald_count,
                "bob_detect_count": self.bob_detect_count,
                "bob_miss_given_herald": self.bob_miss_given_herald,
                "bob_miss_joint": self.bob_miss_joint,
                "sifted_key_bits": self.sifted_key_bits,
                "verdict": self.verdict.value,
                "seed": self.seed,
                "rng_algorithm": self.rng_algorithm,
            },
            indent=2,
        )


def sample_cells(jd: JointDistribution, n_pulses: int, seed) -> tuple[np.ndarray, np.ndarray]:
    """Draw (n1, n2) photon numbers for n_pulses pulses.

    seed is an integer or a numpy Generator (consumes one uniform per
    pulse).  The residual mass 1 - captured_mass goes to an overflow bucket
    reported as n1 = n2 = jd.p.shape[0], i.e. beyond the box: a
    multi-photon event on both ports.
    """
    if n_pulses <= 0:
        raise EmptySessionError(f"n_pulses must be positive, got {n_pulses}")
    if jd.captured_mass < 1.0 - _MAX_MISSING_MASS:
        raise ValueError(
            f"captured_mass = {jd.captured_mass:.9f} leaves more than "
            f"{_MAX_MISSING_MASS:.0e} unsampled; rerun with a larger box"
        )
    rng = np.random.default_rng(seed)
    cum = np.cumsum(jd.p.ravel())
    idx = np.searchsorted(cum, rng.random(n_pulses), side="right")
    rows, cols = jd.p.shape
    over = idx >= rows * cols
    n1 = np.where(over, rows, idx // cols)
    n2 = np.where(over, rows, idx % cols)
    return n1, n2


def _judge(miss_hat: float, herald_count: int, baseline: float, z_threshold: float) -> Verdict:
    if herald_count < MIN_HERALDS_FOR_TEST:
        return Verdict.INCONCLUSIVE
    spread = baseline * (1.0 - baseline)
    if spread == 0.0:
        return Verdict.ATTACK_SUSPECTED if miss_hat > baseline else Verdict.CLEAN
    z = (miss_hat - baseline) / math.sqrt(spread / herald_count)
    return Verdict.ATTACK_SUSPECTED if z > z_threshold else Verdict.CLEAN


def simulate_session(jd: JointDistribution, n_pulses: int,
                     attack: AttackModel = AttackModel(), seed: int = 0) -> SessionReport:
    """Run one session; deterministic given (jd, n_pulses, attack, seed).

    The verdict is judged against the closed-form no-attack baseline
    (q1 - q2)/q1 of the same source at the default threshold z = 5;
    detect_attack re-judges a report against any other baseline.
    """
    rng = np.random.default_rng(seed)
    n1, n2 = sample_cells(jd, n_pulses, rng)
    theft_u = rng.random(n_pulses)
    alice_basis = rng.integers(0, 2, size=n_pulses)
    bob_basis = rng.integers(0, 2, size=n_pulses)

    herald = n1 >= 1
    all_stolen = theft_u < np.power(attack.routed_fraction, n2)
    detect = herald & (n2 >= 1) & ~all_stolen

    herald_count = int(np.count_nonzero(herald))
    if herald_count == 0:
        raise NoHeraldError("no pulse heralded; miss rate undefined")
    detect_count = int(np.count_nonzero(detect))
    sifted = int(np.count_nonzero(detect & (alice_basis == bob_basis)))

    miss_given_herald = (herald_count - detect_count) / herald_count
    tp = threshold_probs(jd)
    baseline = (tp.q1 - tp.q2) / tp.q1 if tp.q1 > 0.0 else 0.0
    return SessionReport(
        n_pulses=n_pulses,
        herald_count=herald_count,
        bob_detect_count=detect_count,
        bob_miss_given_herald=miss_given_herald,
        bob_miss_joint=(herald_count - detect_count) / n_pulses,
        sifted_key_bits=sifted,
        verdict=_judge(miss_given_herald, herald_count, baseline, 5.0),
        seed=seed,
    )


def detect_attack(report: SessionReport, baseline_miss_given_herald: float,
                  z_threshold: float = 5.0) -> Verdict:
    """One-sided binomial z-test of the session's miss rate against a baseline.

    attack_suspected iff z > z_threshold; fewer than MIN_HERALDS_FOR_TEST
    heralds is inconclusive.
    """
    if not 0.0 <= baseline_miss_given_herald <= 1.0:
        raise ValueError("baseline_miss_given_herald must lie in [0, 1]")
    if z_threshold <= 0.0:
        raise ValueError("z_threshold must be positive")
    return _judge(report.bob_miss_given_herald, report.herald_count,
                  baseline_miss_given_herald, z_threshold)
