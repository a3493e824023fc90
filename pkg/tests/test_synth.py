import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from robcsp import SynthSpec, covariance_ensemble, generate, random_rotation
from robcsp.synth import mixing_matrix, replicate_specs


def test_rotation_one_dimensional():
    np.testing.assert_array_equal(random_rotation(1, np.random.default_rng(0)), [[1.0]])


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 12))
def test_rotation_is_special_orthogonal(seed, n):
    Q = random_rotation(n, np.random.default_rng(seed))
    assert np.linalg.norm(Q.T @ Q - np.eye(n)) <= 1e-12
    assert np.linalg.det(Q) == pytest.approx(1.0, abs=1e-10)


def test_rotation_entries_are_centred():
    rng = np.random.default_rng(1)
    draws = np.stack([random_rotation(4, rng) for _ in range(1000)])
    # entries have variance 1/n, so the mean's standard error is 1/sqrt(n * draws)
    se = 1.0 / np.sqrt(4 * 1000)
    assert np.all(np.abs(draws.mean(axis=0)) <= 3.5 * se)


def test_default_shapes():
    minus, plus = generate(SynthSpec(seed=42))
    assert minus.trials.shape == (50, 10, 200)
    assert plus.trials.shape == (50, 10, 200)
    assert (minus.condition, plus.condition) == ("minus", "plus")


def test_same_seed_bit_identical():
    a = generate(SynthSpec(seed=9, trials_per_condition=5))
    b = generate(SynthSpec(seed=9, trials_per_condition=5))
    for x, y in zip(a, b):
        assert x.trials.tobytes() == y.trials.tobytes()
    c = generate(SynthSpec(seed=10, trials_per_condition=5))
    assert not np.array_equal(a[0].trials, c[0].trials)


def test_source_variance_law_of_large_numbers():
    spec = SynthSpec(seed=3, noise_var=0.0, mixing=np.eye(10), t=1000, trials_per_condition=100)
    minus, plus = generate(spec)
    cols_minus = minus.trials.transpose(1, 0, 2).reshape(10, -1)
    cols_plus = plus.trials.transpose(1, 0, 2).reshape(10, -1)
    assert np.var(cols_minus[0]) == pytest.approx(0.2, rel=0.05)
    assert np.var(cols_minus[1]) == pytest.approx(1.4, rel=0.05)
    assert np.var(cols_plus[0]) == pytest.approx(1.8, rel=0.05)
    assert np.var(cols_plus[2]) == pytest.approx(1.0, rel=0.05)


def test_population_covariance_structure():
    spec = SynthSpec(seed=11, noise_var=0.0, trials_per_condition=500)
    minus, _ = generate(spec)
    A = mixing_matrix(spec)
    pop = A @ np.diag([0.2, 1.4] + [1.0] * 8) @ A.T
    avg = covariance_ensemble(minus).average
    assert np.linalg.norm(avg - pop) <= 0.1 * np.linalg.norm(pop)


def test_train_test_share_mixing_not_noise():
    train, test = replicate_specs(4, {"trials_per_condition": 3}, {"trials_per_condition": 3})
    assert test.noise_var == 30.0 and train.noise_var == 2.0
    np.testing.assert_array_equal(mixing_matrix(train), mixing_matrix(test))
    assert not np.array_equal(generate(train)[0].trials, generate(test)[0].trials)


@pytest.mark.parametrize(
    "kw",
    [
        dict(n_disc=11),
        dict(variances={"minus": (0.2,), "plus": (1.8, 0.6)}),
        dict(variances={"minus": (0.0, 1.0), "plus": (1.8, 0.6)}),
        dict(split="validation"),
        dict(noise_var=-1.0),
    ],
)
def test_spec_validation(kw):
    with pytest.raises(ValueError):
        SynthSpec(**kw)
