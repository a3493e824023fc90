"""Synthetic two-condition trials from a linear mixing model.

Each sample column is ``A @ [s_disc; s_nondisc] + eps`` with one random
rotation ``A`` per seed, shared by both conditions, every trial and both the
train and test splits. Randomness comes from numpy's PCG64 with
``SeedSequence`` spawning: child 0 draws ``A``, children 1 and 2 feed the
train and test splits, and each of those spawns one stream per trial.
"""
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .covariance import TrialSet

# per-source variances of the discriminative sources
DISC_VARIANCES = {"minus": (0.2, 1.4), "plus": (1.8, 0.6)}
NONDISC_VARIANCE = 1.0
TRAIN_NOISE_VAR = 2.0
TEST_NOISE_VAR = 30.0
SPLITS = ("train", "test")


@dataclass(frozen=True)
class SynthSpec:
    n: int = 10
    t: int = 200
    n_disc: int = 2
    variances: dict = field(default_factory=lambda: dict(DISC_VARIANCES))
    nondisc_var: float = NONDISC_VARIANCE
    noise_var: float = TRAIN_NOISE_VAR
    trials_per_condition: int = 50
    seed: int = 0
    split: str = "train"
    mixing: Optional[np.ndarray] = None  # overrides the random rotation

    def __post_init__(self):
        if not 1 <= self.n_disc <= self.n:
            raise ValueError("need 1 <= n_disc <= n")
        for cond in ("minus", "plus"):
            v = self.variances[cond]
            if len(v) != self.n_disc or min(v) <= 0:
                raise ValueError(f"need {self.n_disc} positive source variances for {cond!r}")
        if self.nondisc_var <= 0 or self.noise_var < 0:
            raise ValueError("variances must be positive (noise may be zero)")
        if self.split not in SPLITS:
            raise ValueError(f"split must be one of {SPLITS}")
        if self.trials_per_condition < 2 or self.t < 2:
            raise ValueError("need at least two trials of at least two samples")

    @classmethod
    def test_split(cls, **kw):
        kw.setdefault("noise_var", TEST_NOISE_VAR)
        return cls(split="test", **kw)


def random_rotation(n, rng):
    """Haar-distributed rotation: QR of a Gaussian matrix, signs fixed, det +1."""
    if n == 1:
        return np.ones((1, 1))
    Z = rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def _streams(seed):
    root = np.random.SeedSequence(int(seed) & (2**64 - 1))
    mix, train, test = root.spawn(3)
    return mix, {"train": train, "test": test}


def mixing_matrix(spec):
    if spec.mixing is not None:
        return np.asarray(spec.mixing, dtype=np.float64)
    mix, _ = _streams(spec.seed)
    return random_rotation(spec.n, np.random.Generator(np.random.PCG64(mix)))


def generate(spec) -> Tuple[TrialSet, TrialSet]:
    A = mixing_matrix(spec)
    _, splits = _streams(spec.seed)
    cond_seqs = splits[spec.split].spawn(2)
    n_nondisc = spec.n - spec.n_disc
    out = []
    for cond, seq in zip(("minus", "plus"), cond_seqs):
        std = np.sqrt(
            np.concatenate([spec.variances[cond], np.full(n_nondisc, spec.nondisc_var)])
        )
        trials = np.empty((spec.trials_per_condition, spec.n, spec.t))
        for i, child in enumerate(seq.spawn(spec.trials_per_condition)):
            rng = np.random.Generator(np.random.PCG64(child))
            sources = rng.standard_normal((spec.n, spec.t)) * std[:, None]
            noise = rng.standard_normal((spec.n, spec.t)) * np.sqrt(spec.noise_var)
            trials[i] = A @ sources + noise
        out.append(TrialSet(cond, trials))
    return out[0], out[1]


def replicate_specs(seed, train_kw=None, test_kw=None):
    """Matching train/test specs that share one mixing matrix."""
    train = SynthSpec(seed=seed, **(train_kw or {}))
    test = SynthSpec.test_split(seed=seed, **(test_kw or {}))
    return train, test

