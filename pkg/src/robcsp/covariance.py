"""Trial preprocessing, covariance ensembles and PCA-derived tolerance models."""
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateTrial, InsufficientVariability, ShapeMismatch
from .linalg import fix_signs, pd_repair, sym_eig

W_TOL = 1e-10
CONDITIONS = ("minus", "plus")


@dataclass(frozen=True)
class TrialSet:
    """Trials of one condition, stacked as an array of shape (N, n, t)."""

    condition: str
    trials: np.ndarray

    def __post_init__(self):
        trials = np.asarray(self.trials, dtype=np.float64)
        if self.condition not in CONDITIONS:
            raise ValueError(f"condition must be one of {CONDITIONS}")
        if trials.ndim != 3:
            raise ShapeMismatch("trials must be an (N, n, t) array")
        if trials.shape[0] < 1:
            raise ValueError("a trial set needs at least one trial")
        object.__setattr__(self, "trials", trials)

    @property
    def n_trials(self):
        return self.trials.shape[0]

    @property
    def n_channels(self):
        return self.trials.shape[1]

    @property
    def n_samples(self):
        return self.trials.shape[2]


@dataclass(frozen=True)
class CovarianceEnsemble:
    per_trial: np.ndarray  # (N, n, n)
    average: np.ndarray
    repaired: bool = False


@dataclass(frozen=True)
class ToleranceModel:
    """Ellipsoidal tolerance set around ``average``.

    ``interp`` has shape (m, n, n); ``weights`` are the PCA variances in
    descending order. ``orientation`` is +1 for the condition whose variance is
    maximized by the inner problem and -1 for the complement.
    """

    average: np.ndarray
    interp: np.ndarray
    weights: np.ndarray
    radius: float
    orientation: int = 1
    _interp_fro_max: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        interp = np.asarray(self.interp, dtype=np.float64)
        weights = np.asarray(self.weights, dtype=np.float64)
        if interp.ndim != 3 or interp.shape[0] < 1:
            raise ValueError("interp must be a non-empty (m, n, n) stack")
        if weights.shape != (interp.shape[0],):
            raise ValueError("need one weight per interpolation matrix")
        if np.any(weights <= 0) or np.any(np.diff(weights) > 0):
            raise ValueError("weights must be positive and nonincreasing")
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        object.__setattr__(self, "interp", interp)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "average", np.asarray(self.average, dtype=np.float64))
        object.__setattr__(
            self, "_interp_fro_max", float(np.max(np.linalg.norm(interp, axis=(1, 2))))
        )

    @property
    def n(self):
        return self.average.shape[0]

    @property
    def m(self):
        return self.interp.shape[0]

    def with_radius(self, radius):
        return ToleranceModel(self.average, self.interp, self.weights, radius, self.orientation)

    def with_orientation(self, orientation):
        return ToleranceModel(self.average, self.interp, self.weights, self.radius, orientation)


def center_scale_trial(Y):
    """Remove each channel's mean and scale by ``1/sqrt(t - 1)``."""
    Y = np.asarray(Y, dtype=np.float64)
    t = Y.shape[-1]
    if t < 2:
        raise DegenerateTrial(f"a trial needs at least 2 samples, got {t}")
    return (Y - Y.mean(axis=-1, keepdims=True)) / np.sqrt(t - 1.0)


def covariance_ensemble(ts, assume_preprocessed=False):
    trials = ts.trials if assume_preprocessed else center_scale_trial(ts.trials)
    per_trial = np.einsum("kit,kjt->kij", trials, trials)
    per_trial = (per_trial + per_trial.transpose(0, 2, 1)) / 2.0
    # fixed summation order keeps the average bit-reproducible
    average = np.zeros(per_trial.shape[1:])
    for S in per_trial:
        average += S
    average /= per_trial.shape[0]

    n = average.shape[0]
    floor = 1e-10 * np.trace(average) / n
    repaired = False
    if floor <= 0 or sym_eig(average).values[0] <= floor:
        warnings.warn(
            f"average covariance of condition {ts.condition!r} is not positive "
            "definite; clipping its spectrum",
            RuntimeWarning,
            stacklevel=2,
        )
        average = pd_repair(average, floor if floor > 0 else 1e-10)
        repaired = True
    return CovarianceEnsemble(per_trial, average, repaired)


def build_tolerance_model(ce, m_requested, radius, orientation=1):
    """PCA on vectorized per-trial covariances.

    The (n^2 x n^2) covariance of the vectorized matrices, normalized by
    ``1/(N - 1)``, is never formed: its nonzero spectrum is read off the
    (N x N) Gram matrix of the centered, scaled vectors.
    """
    if m_requested < 1:
        raise ValueError("m_requested must be at least 1")
    per_trial = np.asarray(ce.per_trial)
    N, n, _ = per_trial.shape
    if N < 2:
        raise InsufficientVariability("PCA over trials needs at least two trials")
    vecs = per_trial.transpose(0, 2, 1).reshape(N, n * n)  # column-stacked vec
    mean = vecs.mean(axis=0)
    M = ((vecs - mean) / np.sqrt(N - 1.0)).T  # (n^2, N)

    w, U = sym_eig(M.T @ M)
    w, U = w[::-1], U[:, ::-1]
    w_max = w[0]
    if not w_max > 1e-20 * float(mean @ mean):
        raise InsufficientVariability("per-trial covariances show no variability")
    m = min(int(m_requested), int(np.sum(w > W_TOL * w_max)))

    nus = M @ U[:, :m] / np.sqrt(w[:m])
    nus = fix_signs(nus / np.linalg.norm(nus, axis=0))
    mats = nus.T.reshape(m, n, n).transpose(0, 2, 1)  # undo column stacking
    interp = (mats + mats.transpose(0, 2, 1)) / 2.0
    return ToleranceModel(ce.average, interp, w[:m].copy(), float(radius), int(orientation))
