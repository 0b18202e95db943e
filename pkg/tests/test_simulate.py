"""Seeded trajectory sampling and Monte Carlo validation."""

import numpy as np
import pytest

from cmseq import (
    BoundaryCondition,
    ConditioningSide,
    InsufficientSamplesError,
    LawClass,
    SampleBatch,
    build_backward,
    build_forward,
    mc_validate,
    model_covariance,
    random_law,
    sample_backward,
    sample_covariance,
    sample_forward,
)
from cmseq.fixtures import ar1_law, identity_law

FIRST = ConditioningSide.FIRST
LAST = ConditioningSide.LAST
BC1 = BoundaryCondition.BC1
BC2 = BoundaryCondition.BC2

AR1_MODEL = build_forward(ar1_law(4), LAST, BC1)


def test_sampling_is_deterministic():
    a = sample_forward(AR1_MODEL, 50, seed=123)
    b = sample_forward(AR1_MODEL, 50, seed=123)
    assert a.data.tobytes() == b.data.tobytes()
    c = sample_forward(AR1_MODEL, 50, seed=124)
    assert a.data.tobytes() != c.data.tobytes()


def test_replicates_are_independent_substreams():
    """Replicate r depends only on (seed, r), so growing the batch extends
    it without disturbing what was already drawn."""
    small = sample_forward(AR1_MODEL, 10, seed=9)
    big = sample_forward(AR1_MODEL, 25, seed=9)
    np.testing.assert_array_equal(big.data[:10], small.data)


def test_batch_shape_and_immutability():
    batch = sample_forward(AR1_MODEL, 7, seed=1)
    assert batch.data.shape == (7, 5, 1)
    assert batch.n_replicates == 7 and batch.n_last == 4 and batch.dim == 1
    with pytest.raises(ValueError):
        batch.data[0, 0, 0] = 0.0


def test_sample_batch_validates_shape():
    with pytest.raises(ValueError):
        SampleBatch(3, 2, 1, np.zeros((3, 2, 1)), 0)  # needs n_last+1 = 3 times


def test_sample_covariance_trivial_batches():
    zeros = SampleBatch(4, 2, 1, np.zeros((4, 3, 1)), 0)
    np.testing.assert_array_equal(sample_covariance(zeros).data, np.zeros((3, 3)))

    x = np.array([1.0, -2.0, 0.5])
    dup = SampleBatch(5, 2, 1, np.tile(x[None, :, None], (5, 1, 1)), 0)
    np.testing.assert_allclose(sample_covariance(dup).data, np.outer(x, x), atol=1e-14)


def test_sample_covariance_matches_direct_formula():
    batch = sample_forward(AR1_MODEL, 11, seed=5)
    flat = batch.data.reshape(11, -1)
    np.testing.assert_allclose(
        sample_covariance(batch).data, flat.T @ flat / 11.0, atol=1e-14
    )


def test_sample_covariance_needs_two_replicates():
    lone = sample_forward(AR1_MODEL, 1, seed=3)
    with pytest.raises(InsufficientSamplesError):
        sample_covariance(lone)


def test_reconstructed_noise_is_white():
    """Driving residuals recovered from the trajectories should be mutually
    uncorrelated across time — they are the model's independent noises."""
    m = AR1_MODEL
    batch = sample_forward(m, 20000, seed=77)
    x = batch.data[:, :, 0]
    resid = np.empty((20000, 3))
    for i, k in enumerate((1, 2, 3)):
        resid[:, i] = (
            x[:, k]
            - x[:, k - 1] * m.g_trans[k][0, 0]
            - x[:, 4] * m.g_cond[k][0, 0]
        )
    cross = resid.T @ resid / 20000.0
    np.testing.assert_allclose(cross, np.diag(np.diag(cross)), atol=0.05)
    # and the variances are the model's noise covariances
    for i, k in enumerate((1, 2, 3)):
        assert cross[i, i] == pytest.approx(m.g_noise[k][0, 0], abs=0.05)


def test_forward_and_backward_sampling_agree_in_law():
    law = ar1_law(3)
    f = sample_covariance(sample_forward(build_forward(law, LAST, BC1), 40000, seed=2))
    b = sample_covariance(sample_backward(build_backward(law, FIRST, BC1), 40000, seed=2))
    assert np.max(np.abs(f.data - b.data)) < 0.04


def test_mc_validate_passes_on_matched_model():
    report = mc_validate(AR1_MODEL, 20000, seed=6, tol_abs=0.05)
    assert report.passed
    assert report.worst_abs_dev < 0.05
    assert report.n_replicates == 20000 and report.seed == 6


def test_mc_validate_catches_wrong_reference():
    report = mc_validate(AR1_MODEL, 20000, seed=6, tol_abs=0.05, reference=identity_law(4))
    assert not report.passed
    i, j = report.worst_entry
    assert i != j  # the AR(1) cross-correlations are what the white law lacks


def test_mc_validate_rejects_hopeless_tolerance():
    with pytest.raises(ValueError):
        mc_validate(AR1_MODEL, 100, seed=0, tol_abs=0.02)


def test_backward_models_sample_their_own_law():
    law = random_law(LawClass.RECIPROCAL, 3, 2, seed=21)
    model = build_backward(law, FIRST, BC2)
    report = mc_validate(model, 20000, seed=14, tol_abs=0.1)
    assert report.passed


def test_conditioning_on_first_time_samples_correctly():
    # the equal-split convention must not double-count the x_0 weight
    law = ar1_law(3)
    model = build_forward(law, FIRST, BC1)
    report = mc_validate(model, 20000, seed=31, tol_abs=0.05)
    assert report.passed


def test_sampling_type_checks():
    law = ar1_law(2)
    fwd = build_forward(law, LAST, BC1)
    bwd = build_backward(law, FIRST, BC1)
    with pytest.raises(TypeError):
        sample_forward(bwd, 3, 0)
    with pytest.raises(TypeError):
        sample_backward(fwd, 3, 0)
