"""Random-instance factories shared by the test modules."""
import numpy as np

from robcsp import (
    KernelPair,
    SynthSpec,
    TrialSet,
    build_tolerance_model,
    covariance_ensemble,
    generate,
)
from robcsp.pipeline import Prepared


def random_spd(rng, n, spread=1.0):
    """SPD matrix with eigenvalues in [1, 1 + spread * n]."""
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return Q @ np.diag(1.0 + spread * n * rng.random(n)) @ Q.T


def random_trialset(rng, condition, n, n_trials=8, t=40):
    mix = rng.standard_normal((n, n)) + 2.0 * np.eye(n)
    scales = 0.5 + rng.random((n_trials, n, 1))
    trials = np.einsum("ij,kjt->kit", mix, scales * rng.standard_normal((n_trials, n, t)))
    return TrialSet(condition, trials)


def random_model(rng, n=4, m=3, radius=0.5, orientation=1, n_trials=8):
    ce = covariance_ensemble(random_trialset(rng, "minus", n, n_trials))
    return build_tolerance_model(ce, m, radius, orientation)


def random_pair(rng, n=4, m=3, delta=0.5, n_trials=8):
    """Kernel pair whose radius is a fraction of what keeps both sides positive."""
    ce_own = covariance_ensemble(random_trialset(rng, "minus", n, n_trials))
    ce_other = covariance_ensemble(random_trialset(rng, "plus", n, n_trials))
    own = build_tolerance_model(ce_own, m, delta, 1)
    other = build_tolerance_model(ce_other, m, delta, -1)
    return KernelPair(own, other)


def feasible_pair(rng, n=4, m=3, fraction=0.3, n_trials=8):
    """Pair whose radius is ``fraction`` of the largest radius keeping the
    complement's worst case positive definite for every alpha."""
    pair = random_pair(rng, n, m, 0.0, n_trials)
    other = pair.other
    # ||sum alpha_i V_i||_2 <= delta * sqrt(sum w_i ||V_i||_2^2)
    spread = np.sqrt(np.sum(other.weights * np.linalg.norm(other.interp, 2, axis=(1, 2)) ** 2))
    lam_min = np.linalg.eigvalsh(other.average)[0]
    delta = fraction * lam_min / spread
    return KernelPair(pair.own.with_radius(delta), other.with_radius(delta)), delta


def random_unit(rng, n):
    x = rng.standard_normal(n)
    return x / np.linalg.norm(x)


def sample_alpha(rng, weights, delta, count):
    """Feasible alphas (||alpha||_{W^-1} <= delta), half of them on the boundary."""
    z = rng.standard_normal((count, len(weights)))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    r = np.ones(count)
    r[count // 2:] = rng.random(count - count // 2) ** (1.0 / len(weights))
    return delta * r[:, None] * z * np.sqrt(weights)


def seed42_prepared(m=10):
    return Prepared(*generate(SynthSpec(seed=42)), m=m)
