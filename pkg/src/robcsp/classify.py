"""Log-variance features, Fisher LDA and the balanced classification rate."""
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateVariance, EmptyTestSet


@dataclass(frozen=True)
class LdaClassifier:
    """Decision function ``phi(f) = a' f - b``; positive means condition minus."""

    a: np.ndarray
    b: float

    def decision(self, features):
        return np.asarray(features) @ self.a - self.b

    def to_dict(self):
        return {"a": [float(v) for v in self.a], "b": float(self.b)}


def log_variance(Y, x_minus, x_plus):
    """Features of one trial (2,) or a stack of trials (N, 2)."""
    Y = np.asarray(Y, dtype=np.float64)
    X = np.column_stack([x_minus, x_plus])
    proj = np.einsum("...it,ik->...kt", Y, X)
    var = np.sum(proj * proj, axis=-1)
    if np.any(var <= 0):
        raise DegenerateVariance("a filter annihilates a trial; variance is not positive")
    return np.log(var)


def fit_lda(features_minus, features_plus):
    F_m = np.asarray(features_minus, dtype=np.float64)
    F_p = np.asarray(features_plus, dtype=np.float64)
    if len(F_m) < 2 or len(F_p) < 2:
        raise ValueError("each class needs at least two feature vectors")
    m_m, m_p = F_m.mean(axis=0), F_p.mean(axis=0)
    # unnormalized scatter matrices
    C = (F_m - m_m).T @ (F_m - m_m) + (F_p - m_p).T @ (F_p - m_p)
    if np.linalg.cond(C) > 1e12:
        warnings.warn("pooled scatter is singular; adding a ridge", RuntimeWarning, stacklevel=2)
        C = C + 1e-10 * np.trace(C) / 2.0 * np.eye(2)
    a = np.linalg.solve(C, m_m - m_p)
    a = a / np.linalg.norm(a)
    return LdaClassifier(a, 0.5 * float(a @ (m_m + m_p)))


def classification_rate(clf, features_minus, features_plus):
    """Mean of per-class accuracies; a zero decision value counts as wrong."""
    F_m = np.asarray(features_minus, dtype=np.float64).reshape(-1, 2)
    F_p = np.asarray(features_plus, dtype=np.float64).reshape(-1, 2)
    if len(F_m) == 0 or len(F_p) == 0:
        raise EmptyTestSet("both test classes need at least one trial")
    hit_m = np.count_nonzero(clf.decision(F_m) > 0) / len(F_m)
    hit_p = np.count_nonzero(clf.decision(F_p) < 0) / len(F_p)
    return 0.5 * (hit_m + hit_p)
