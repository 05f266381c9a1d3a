import numpy as np
import pytest

from pcbs.fock import SqueezedInput, TruncationPolicy, output_amplitudes
from pcbs.oracle import oracle_state


def inner_block_error(state, n_max, tail_tolerance=1e-4):
    """Max |closed form - matrix exponential| over the block n1, n2 <= n_max/2.

    Cells near the truncation edge lean on out-of-box input columns in both
    codes, so only the interior block is a meaningful comparison.  The tail
    gate is kept loose on purpose: entry accuracy on that block is what is
    under test, not the captured mass.
    """
    policy = TruncationPolicy(n_max=n_max, tail_tolerance=tail_tolerance)
    cf = output_amplitudes(state, policy).entries
    orc = oracle_state(state, n_max).entries
    half = n_max // 2 + 1
    return float(np.max(np.abs(cf - orc)[:half, :half]))


def test_oracle_vacuum():
    orc = oracle_state(SqueezedInput(r=0.0, alpha=0.0), 6).entries
    assert np.isclose(orc[0, 0], 1.0, atol=1e-12)
    assert np.max(np.abs(orc)[1:, :]) < 1e-12


def test_oracle_matches_closed_form_at_working_point():
    err = inner_block_error(SqueezedInput(r=1.0, alpha=0.5), 40)
    assert err < 1e-8


@pytest.mark.parametrize("r,alpha,n_max", [(0.5, 0.25, 40), (0.0, 1.0, 40), (1.25, 1.0, 64)])
def test_oracle_matches_closed_form_elsewhere(r, alpha, n_max):
    err = inner_block_error(SqueezedInput(r=r, alpha=alpha), n_max)
    assert err < 1e-8


def test_oracle_parity_selection():
    orc = oracle_state(SqueezedInput(r=0.8, alpha=0.0), 24).entries
    n1, n2 = np.indices(orc.shape)
    assert np.max(np.abs(orc[(n1 + n2) % 2 == 1])) < 1e-13
