import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from robcsp import (
    SynthSpec,
    ToleranceModel,
    TrialSet,
    build_tolerance_model,
    center_scale_trial,
    covariance_ensemble,
    generate,
)
from robcsp.covariance import CovarianceEnsemble
from robcsp.errors import DegenerateTrial, InsufficientVariability, ShapeMismatch

from helpers import random_trialset


def direct_pca(per_trial):
    """Eigendecomposition of the explicit n^2 x n^2 covariance of vec(S_i)."""
    N, n, _ = per_trial.shape
    vecs = per_trial.transpose(0, 2, 1).reshape(N, n * n)
    gamma = np.atleast_2d(np.cov(vecs, rowvar=False, ddof=1))
    w, U = np.linalg.eigh(gamma)
    return w[::-1], U[:, ::-1]


def ensemble(mats):
    mats = np.asarray(mats, dtype=float)
    return CovarianceEnsemble(mats, mats.mean(axis=0))


# center_scale_trial

def test_center_scale_zero_mean_pair():
    np.testing.assert_array_equal(center_scale_trial([[1.0, -1.0]]), [[1.0, -1.0]])


def test_center_scale_constant_row():
    np.testing.assert_array_equal(center_scale_trial([[5.0, 5.0, 5.0]]), [[0.0, 0.0, 0.0]])


def test_center_scale_random(rng):
    Y = rng.standard_normal((3, 10)) + 4.0
    out = center_scale_trial(Y)
    assert np.all(np.abs(out.mean(axis=1)) <= 1e-12)
    # direct formula
    t = 10
    ref = Y @ (np.eye(t) - np.ones((t, t)) / t) / np.sqrt(t - 1)
    np.testing.assert_allclose(out, ref, atol=1e-14)


def test_center_scale_degenerate():
    with pytest.raises(DegenerateTrial):
        center_scale_trial([[1.0], [2.0]])


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), t=st.integers(2, 30))
def test_centering_is_idempotent(seed, t):
    Y = np.random.default_rng(seed).standard_normal((3, t))
    once = center_scale_trial(Y) * np.sqrt(t - 1)
    twice = center_scale_trial(once) * np.sqrt(t - 1)
    np.testing.assert_allclose(twice, once, atol=1e-12)


# TrialSet

def test_trialset_validation():
    with pytest.raises(ValueError):
        TrialSet("left", np.zeros((2, 2, 3)))
    with pytest.raises(ShapeMismatch):
        TrialSet("minus", np.zeros((2, 3)))
    ts = TrialSet("plus", np.zeros((4, 2, 3)))
    assert (ts.n_trials, ts.n_channels, ts.n_samples) == (4, 2, 3)


# covariance_ensemble

def test_ensemble_single_identity_trial():
    ce = covariance_ensemble(TrialSet("minus", np.eye(2)[None]), assume_preprocessed=True)
    np.testing.assert_array_equal(ce.per_trial, [np.eye(2)])
    np.testing.assert_array_equal(ce.average, np.eye(2))
    assert not ce.repaired


def test_ensemble_average_of_diagonals():
    trials = np.stack([np.diag([1.0, 2.0]), np.diag([3.0, 1.0])])
    ce = covariance_ensemble(TrialSet("minus", trials), assume_preprocessed=True)
    np.testing.assert_allclose(ce.average, np.diag([5.0, 2.5]), rtol=1e-15)


def test_ensemble_synthetic_is_pd():
    ts, _ = generate(SynthSpec(seed=3))
    ce = covariance_ensemble(ts)
    assert np.linalg.eigvalsh(ce.average)[0] > 0
    np.testing.assert_allclose(ce.average, ce.per_trial.mean(axis=0), atol=1e-12)
    Y = center_scale_trial(ts.trials[7])
    np.testing.assert_allclose(ce.per_trial[7], Y @ Y.T, atol=1e-14)


def test_ensemble_repairs_rank_deficient_average():
    trials = np.zeros((3, 3, 5))
    trials[:, 0, :] = np.random.default_rng(0).standard_normal((3, 5))
    with pytest.warns(RuntimeWarning, match="not positive definite"):
        ce = covariance_ensemble(TrialSet("plus", trials))
    assert ce.repaired
    assert np.linalg.eigvalsh(ce.average)[0] > 0


def test_ensemble_average_is_schedule_independent(rng):
    ts = random_trialset(rng, "minus", 5, 20)
    a = covariance_ensemble(ts).average
    b = covariance_ensemble(TrialSet("minus", ts.trials.copy())).average
    np.testing.assert_array_equal(a, b)


# build_tolerance_model

def test_identical_trials_have_no_variability():
    ce = ensemble([np.eye(2)] * 4)
    with pytest.raises(InsufficientVariability):
        build_tolerance_model(ce, 3, 1.0)


def test_hand_built_ensemble_matches_direct_pca():
    mats = [
        [[2.0, 0.5], [0.5, 1.0]],
        [[1.0, -0.2], [-0.2, 3.0]],
        [[1.5, 0.1], [0.1, 0.5]],
    ]
    model = build_tolerance_model(ensemble(mats), 10, 1.0)
    w_ref, _ = direct_pca(np.asarray(mats))
    # three trials leave at most two nonzero directions
    assert model.m == 2
    np.testing.assert_allclose(model.weights, w_ref[:2], rtol=1e-10, atol=1e-10)


def test_truncation_to_available_rank(rng):
    # 5 trials span at most 4 centered directions
    trials = random_trialset(rng, "minus", 4, n_trials=5)
    model = build_tolerance_model(covariance_ensemble(trials), 10, 1.0)
    assert model.m == 4
    assert np.all(np.diff(model.weights) <= 0)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 4), n_trials=st.integers(2, 6))
def test_gram_trick_matches_direct_pca(seed, n, n_trials):
    rng = np.random.default_rng(seed)
    ce = covariance_ensemble(random_trialset(rng, "minus", n, n_trials, t=12))
    model = build_tolerance_model(ce, 50, 0.0)
    w_ref, U_ref = direct_pca(ce.per_trial)
    m = model.m
    np.testing.assert_allclose(model.weights, w_ref[:m], rtol=1e-8, atol=1e-12 * w_ref[0])
    for i in range(m):
        V = model.interp[i]
        assert np.array_equal(V, V.T)
        # a simple eigenvalue pins its eigenvector up to sign
        gaps = np.abs(w_ref - w_ref[i])
        gaps[i] = np.inf
        if gaps.min() > 1e-6 * w_ref[0]:
            ref = U_ref[:, i].reshape(n, n).T
            ref = (ref + ref.T) / 2
            sign = np.sign(np.sum(V * ref))
            np.testing.assert_allclose(V, sign * ref, atol=1e-8)


def test_interp_is_not_renormalized(rng):
    ce = covariance_ensemble(random_trialset(rng, "minus", 3, 8))
    model = build_tolerance_model(ce, 5, 0.0)
    norms = np.linalg.norm(model.interp, axis=(1, 2))
    # vec has unit norm, so symmetrizing can only shrink it
    assert np.all(norms <= 1.0 + 1e-12)


def test_tolerance_model_validation():
    V = np.eye(2)[None]
    with pytest.raises(ValueError):
        ToleranceModel(np.eye(2), V, [0.0], 1.0)
    with pytest.raises(ValueError):
        ToleranceModel(np.eye(2), np.stack([np.eye(2)] * 2), [1.0, 2.0], 1.0)
    with pytest.raises(ValueError):
        ToleranceModel(np.eye(2), V, [1.0], -1.0)
    with pytest.raises(ValueError):
        ToleranceModel(np.eye(2), V, [1.0], 1.0, orientation=0)
    model = ToleranceModel(np.eye(2), V, [1.0], 1.0)
    assert model.with_radius(2.0).radius == 2.0
    assert model.with_orientation(-1).orientation == -1


def test_model_needs_two_trials():
    ce = covariance_ensemble(TrialSet("minus", np.eye(2)[None]), assume_preprocessed=True)
    with pytest.raises(InsufficientVariability):
        build_tolerance_model(ce, 1, 1.0)


def test_no_warning_on_healthy_data(rng):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        covariance_ensemble(random_trialset(rng, "minus", 4, 6))
