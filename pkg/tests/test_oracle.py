"""Brute-force conditional-independence oracle over explicit covariances.

Everything here works directly on Cov(x_a, x_b | x_s) computed from the full
covariance matrix, with no reference to precision sparsity — which is exactly
why the classifier can be cross-validated against it.
"""

import numpy as np
import pytest

from cmseq import (
    CiQuery,
    ConditioningSide,
    IndexInterval,
    OracleSizeError,
    SequenceLaw,
    Tolerance,
    oracle_cm_interval,
    oracle_markov,
    oracle_reciprocal,
    partial_covariance,
)
from cmseq.fixtures import ar1_law, cyclic_example_law, identity_law

FIRST = ConditioningSide.FIRST
LAST = ConditioningSide.LAST


def test_partial_covariance_unconditional_is_plain_block():
    law = ar1_law(2)
    pc = partial_covariance(law.covariance, [0], [2], [])
    np.testing.assert_allclose(pc, [[0.25]], atol=1e-15)


def test_partial_covariance_screens_off_markov_chain():
    law = ar1_law(2)
    pc = partial_covariance(law.covariance, [0], [2], [1])
    np.testing.assert_allclose(pc, [[0.0]], atol=1e-15)


def test_partial_covariance_known_value_on_cyclic_law():
    # conditioning (x_0, x_3) on the interior of the 4-point cyclic law:
    # the conditional covariance is the inverse of the precision submatrix
    # [[2, -0.3], [-0.3, 2]], so the cross term is 0.3/3.91
    law = cyclic_example_law()
    pc = partial_covariance(law.covariance, [0], [3], [1, 2])
    np.testing.assert_allclose(pc, [[0.3 / 3.91]], atol=1e-14)


def test_partial_covariance_rejects_overlapping_sets():
    law = ar1_law(2)
    with pytest.raises(ValueError):
        partial_covariance(law.covariance, [0], [1], [1])
    with pytest.raises(ValueError):
        partial_covariance(law.covariance, [0], [0], [])


def test_partial_covariance_block_shape_multidim():
    law = identity_law(3, dim=2)
    pc = partial_covariance(law.covariance, [0], [2, 3], [1])
    assert pc.shape == (2, 4)
    np.testing.assert_allclose(pc, 0.0, atol=1e-15)


def test_ci_query_validates_disjointness():
    with pytest.raises(ValueError):
        CiQuery(2, (1, 2), (0,))
    with pytest.raises(ValueError):
        CiQuery(3, (1, 4), (0, 1))


def test_markov_oracle_on_fixtures():
    assert oracle_markov(ar1_law(4)).holds
    v = oracle_markov(cyclic_example_law())
    assert not v.holds
    assert v.worst_ratio > 1e-3
    assert v.worst_query is not None and 0 in v.worst_query.dropped


def test_reciprocal_oracle_on_fixtures():
    assert oracle_reciprocal(ar1_law(4)).holds  # Markov implies reciprocal
    assert oracle_reciprocal(cyclic_example_law()).holds
    # breaking the (1, 3) conditional independence breaks reciprocity
    bad = ar1_law(3).covariance.data.copy()
    bad[1, 3] = bad[3, 1] = 0.9
    assert not oracle_reciprocal(SequenceLaw(bad, 1)).holds


def test_cm_interval_oracle_full_range_matches_one_sided_classes(cml_law):
    full = IndexInterval(0, cml_law.n_last)
    assert oracle_cm_interval(cml_law, full, LAST).holds
    assert not oracle_cm_interval(cml_law, full, FIRST).holds


def test_cm_interval_oracle_both_sweep_directions_agree(cml_law, cyclic_law):
    for law in (cml_law, cyclic_law):
        for side in (FIRST, LAST):
            iv = IndexInterval(0, law.n_last)
            past = oracle_cm_interval(law, iv, side, use_future=False)
            future = oracle_cm_interval(law, iv, side, use_future=True)
            assert past.holds == future.holds


def test_cm_interval_oracle_on_proper_interval():
    """A single band-plus-(1,4) precision is conditionally Markov on [1, 4]
    given x_1 but not on the whole range given x_0."""
    a = np.diag([2.0] * 5)
    for i in range(4):
        a[i, i + 1] = a[i + 1, i] = -0.5
    a[1, 4] = a[4, 1] = -0.25
    law = SequenceLaw.from_precision(a, 1)
    assert oracle_cm_interval(law, IndexInterval(1, 4), FIRST).holds
    assert not oracle_cm_interval(law, IndexInterval(0, 4), FIRST).holds
    assert oracle_cm_interval(law, IndexInterval(0, 4), LAST).holds


def test_oracle_is_scale_invariant():
    law = cyclic_example_law()
    scaled = SequenceLaw(73.0 * law.covariance.data, 1)
    v1 = oracle_markov(law)
    v2 = oracle_markov(scaled)
    assert v1.holds == v2.holds
    assert v1.worst_ratio == pytest.approx(v2.worst_ratio, rel=1e-9)


def test_oracle_size_cap():
    big = identity_law(16)  # 17 scalars
    with pytest.raises(OracleSizeError):
        oracle_markov(big)
    with pytest.raises(OracleSizeError):
        oracle_reciprocal(identity_law(8, dim=2))
    # at the cap is still fine
    assert oracle_markov(identity_law(15)).holds


def test_oracle_interval_bounds_checked():
    law = ar1_law(3)
    with pytest.raises(IndexError):
        oracle_cm_interval(law, IndexInterval(0, 4), LAST)


def test_verdict_carries_tolerance_effect():
    law = cyclic_example_law()
    strict = oracle_markov(law)
    loose = oracle_markov(law, Tolerance(residual_tol=10.0))
    assert not strict.holds and loose.holds
    assert strict.worst_ratio == loose.worst_ratio
