import math

import numpy as np
import pytest

from pcbs.errors import PrecisionError, TruncationError
from pcbs.fock import (
    SqueezedInput,
    TruncationPolicy,
    box_probability,
    coherent_amplitudes,
    output_amplitudes,
    squeeze_matrix,
    suggest_n_max,
    two_mode_squeeze_element,
)


def test_coherent_vacuum():
    c = coherent_amplitudes(0.0, 10)
    assert c[0] == 1.0
    assert np.all(c[1:] == 0.0)


def test_coherent_poisson_weights():
    beta = 0.7
    c = coherent_amplitudes(beta, 60)
    # |D_m|^2 is Poisson with mean beta^2
    assert np.isclose(np.sum(c**2), 1.0, atol=1e-12)
    assert np.isclose(c[0], math.exp(-beta**2 / 2), atol=1e-15)
    assert np.isclose(c[3]**2, math.exp(-beta**2) * beta**6 / 6, atol=1e-15)


def test_squeeze_matrix_identity_at_zero():
    s = squeeze_matrix(0.0, 12)
    assert np.array_equal(s, np.eye(13))


def test_squeeze_matrix_vacuum_entry():
    s = squeeze_matrix(0.5, 8)
    assert np.isclose(s[0, 0], 1.0 / math.sqrt(math.cosh(0.5)), atol=1e-12)


def test_squeeze_matrix_parity_zeros():
    s = squeeze_matrix(0.8, 15)
    n, m = np.indices(s.shape)
    assert np.all(s[(n - m) % 2 == 1] == 0.0)


def test_squeezed_vacuum_column_closed_form():
    # <2l|S(-s)|0> = tanh^l(s) sqrt((2l)!) / (2^l l! sqrt(cosh s))
    s = 0.65
    col = squeeze_matrix(s, 20)[:, 0]
    for l in range(10):
        expected = (math.tanh(s) ** l * math.sqrt(math.factorial(2 * l))
                    / (2**l * math.factorial(l) * math.sqrt(math.cosh(s))))
        assert abs(abs(col[2 * l]) - expected) < 1e-10
    assert np.isclose(np.sum(col**2), 1.0, atol=1e-10)


def test_two_mode_element_identity_at_zero():
    assert two_mode_squeeze_element(2, 3, 2, 3, 0.0) == 1.0
    assert two_mode_squeeze_element(2, 3, 3, 2, 0.0) == 0.0


@pytest.mark.parametrize("n1,n2,l,k", [(0, 0, 2, 2), (1, 3, 2, 2), (4, 2, 3, 3),
                                       (1, 2, 2, 2), (0, 1, 0, 0), (5, 5, 5, 5)])
def test_two_mode_element_total_number_parity(n1, n2, l, k):
    # pair creation/annihilation changes total photon number by multiples of 2
    val = two_mode_squeeze_element(n1, n2, l, k, 0.4)
    if (n1 + n2 - l - k) % 2 == 1:
        assert val == 0.0
    else:
        assert np.isfinite(val)


def test_output_vacuum_point():
    amp = output_amplitudes(SqueezedInput(r=0.0, alpha=0.0),
                            TruncationPolicy(n_max=8, tail_tolerance=1e-8))
    assert amp.entries[0, 0] == 1.0
    assert np.isclose(amp.captured_mass, 1.0, atol=1e-15)


def test_output_symmetry_and_normalization():
    amp = output_amplitudes(SqueezedInput(r=1.0, alpha=0.5),
                            TruncationPolicy(n_max=49, tail_tolerance=1e-8))
    assert np.array_equal(amp.entries, amp.entries.T)
    assert 1.0 - 1e-8 <= amp.captured_mass <= 1.0 + 1e-12


def test_output_parity_selection_without_displacement():
    amp = output_amplitudes(SqueezedInput(r=1.0, alpha=0.0),
                            TruncationPolicy(n_max=44, tail_tolerance=1e-8))
    n1, n2 = np.indices(amp.entries.shape)
    assert np.all(amp.entries[(n1 + n2) % 2 == 1] == 0.0)


def test_output_r_zero_factorizes_to_poisson():
    alpha = 0.8
    amp = output_amplitudes(SqueezedInput(r=0.0, alpha=alpha),
                            TruncationPolicy(n_max=40, tail_tolerance=1e-8))
    p = amp.entries**2
    lam = alpha**2 / 2
    n = np.arange(41)
    pois = np.exp(-lam) * lam**n / np.array([math.factorial(k) for k in n])
    assert np.max(np.abs(p - np.outer(pois, pois))) < 1e-10


def test_headline_joint_probabilities():
    amp = output_amplitudes(SqueezedInput(r=1.0, alpha=0.5),
                            TruncationPolicy(n_max=49, tail_tolerance=1e-8))
    p = amp.entries**2
    assert np.isclose(p[0, 0], 0.41720424978086246, atol=1e-9)
    assert np.isclose(p[1, 1], 0.0783274187644218, atol=1e-9)
    assert np.isclose(p[1, 3], 0.021628590143591045, atol=1e-9)


def test_default_policy_rejects_working_point():
    # the true tail at n_max=40 is 8.6e-8, above the default 1e-8 budget
    with pytest.raises(TruncationError):
        output_amplitudes(SqueezedInput(r=1.0, alpha=0.5), TruncationPolicy())


def test_precision_guard_fires_before_float64_breakdown():
    # at r=1.5, alpha=1 the tail budget of 1e-8 needs n_max ~ 100, but the
    # kernel terms overflow the float64 cancellation budget there
    nm = suggest_n_max(1.5, 1.0, 1e-8)
    with pytest.raises(PrecisionError):
        output_amplitudes(SqueezedInput(r=1.5, alpha=1.0),
                          TruncationPolicy(n_max=nm, tail_tolerance=1e-8))


def test_envelope_point_recovers_at_looser_tolerance():
    amp = output_amplitudes(SqueezedInput(r=1.5, alpha=1.0),
                            TruncationPolicy(n_max=78, tail_tolerance=1e-3))
    assert abs(amp.captured_mass - box_probability(SqueezedInput(r=1.5, alpha=1.0), 78)) < 1e-3


def test_box_probability_vacuum_and_monotone():
    st = SqueezedInput(r=1.0, alpha=0.5)
    assert box_probability(SqueezedInput(r=0.0, alpha=0.0), 5) == 1.0
    masses = [box_probability(st, n) for n in (20, 30, 40, 60)]
    assert all(b > a for a, b in zip(masses, masses[1:]))
    assert np.isclose(1.0 - masses[2], 8.588e-8, rtol=1e-3)  # tail at n_max=40


def test_captured_mass_matches_box_probability():
    st = SqueezedInput(r=1.2, alpha=0.5)
    amp = output_amplitudes(st, TruncationPolicy(n_max=70, tail_tolerance=1e-8))
    assert abs(amp.captured_mass - box_probability(st, 70)) < 1e-10


def test_suggest_n_max_working_point():
    nm = suggest_n_max(1.0, 0.5, 1e-8)
    assert nm == 49
    st = SqueezedInput(r=1.0, alpha=0.5)
    assert 1.0 - box_probability(st, nm) < 0.5e-8
    # minimal up to the +2 safety pad
    assert 1.0 - box_probability(st, nm - 4) > 0.5e-8


def test_suggest_n_max_vacuum_is_small():
    assert suggest_n_max(0.0, 0.0, 1e-8) <= 5


def test_suggest_n_max_validation():
    with pytest.raises(ValueError):
        suggest_n_max(-0.1, 0.5, 1e-8)
    with pytest.raises(ValueError):
        suggest_n_max(1.0, 0.5, 0.0)
    with pytest.raises(ValueError):
        suggest_n_max(1.0, 0.5, 1.5)


def test_input_validation():
    with pytest.raises(ValueError):
        SqueezedInput(r=-1.0, alpha=0.5)
    with pytest.raises(ValueError):
        SqueezedInput(r=1.0, alpha=0.5, splitter_phase=0.1)
    with pytest.raises(ValueError):
        SqueezedInput(r=math.inf, alpha=0.5)
    with pytest.raises(ValueError):
        TruncationPolicy(n_max=0)
    with pytest.raises(ValueError):
        TruncationPolicy(tail_tolerance=0.0)
