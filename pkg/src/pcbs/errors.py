"""Exception types shared across the package."""


class PcbsError(Exception):
    """Base class for all package-specific errors."""


class TruncationError(PcbsError):
    """Raised when a truncated Fock computation fails its captured-mass check.

    Attributes
    ----------
    captured_mass : float
        Probability mass actually captured inside the truncated space.
    n_max : int
        Truncation that was used.
    tail_tolerance : float
        Tolerance the computation was required to meet.
    """

    def __init__(self, captured_mass, n_max, tail_tolerance):
        self.captured_mass = captured_mass
        self.n_max = n_max
        self.tail_tolerance = tail_tolerance
        super().__init__(
            f"truncated state captured only {captured_mass:.12g} of the "
            f"probability mass at n_max={n_max} "
            f"(required >= 1 - {tail_tolerance:g}); increase n_max"
        )


class PrecisionError(PcbsError):
    """Raised when a closed-form amplitude sum exceeds double-precision headroom.

    The alternating sums behind the amplitude matrix contain terms that grow
    roughly like exp(c(r) * n_max); once individual terms dwarf the final
    amplitudes, cancellation destroys the result.  Reducing ``n_max`` (or the
    squeeze parameter) restores a clean computation.
    """

    def __init__(self, message, captured_mass=None, peak_term=None):
        self.captured_mass = captured_mass
        self.peak_term = peak_term
        super().__init__(message)


class NoHeraldError(PcbsError):
    """Raised when heralded statistics are requested but the herald never fires."""


class InsufficientScanError(PcbsError):
    """Raised when the band-edge scan grid is too coarse to bracket every edge."""


class DegeneratePointError(PcbsError):
    """Raised when a group velocity is requested at a band degeneracy."""


class UnachievableTargetError(PcbsError):
    """Raised when a requested group velocity is not reached anywhere in a band."""


class EmptySessionError(PcbsError):
    """Raised when a Monte Carlo session is configured with zero pulses."""


class ConfigError(PcbsError):
    """Raised for malformed or unknown configuration input."""
