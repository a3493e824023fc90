"""Eigenvector-dependent matrices of the robust Rayleigh quotient.

For a tolerance model with average ``S``, interpolation matrices ``V_i``,
weights ``w_i``, radius ``delta`` and orientation ``sign``:

* ``v(x)_i = x' V_i x``
* ``alpha(x) = sign * delta * W v / ||v||_W``  (worst case over the ellipsoid)
* ``Sigma(x) = S + sum_i alpha_i V_i``
* ``s(x) = x' Sigma(x) x``
* ``H(x) = Sigma(x) + Sigma~(x)`` with ``Sigma~ = grad(alpha) grad(v)' / 2``

``H`` is half the Hessian of ``s``; ``q = s_own / (s_own + s_other)`` is the
objective.
"""
from dataclasses import dataclass

import numpy as np

from .covariance import ToleranceModel
from .errors import NonpositiveDenominator, ZeroVector


@dataclass(frozen=True)
class KernelPair:
    own: ToleranceModel
    other: ToleranceModel

    def __post_init__(self):
        if self.own.n != self.other.n:
            raise ValueError("both tolerance models need the same channel count")
        if self.own.orientation != 1 or self.other.orientation != -1:
            raise ValueError("own must have orientation +1 and other -1")

    @classmethod
    def from_models(cls, own, other):
        """Pair two models, forcing the orientations the pairing requires."""
        return cls(own.with_orientation(1), other.with_orientation(-1))

    @property
    def n(self):
        return self.own.n


@dataclass(frozen=True)
class KernelEval:
    x: np.ndarray
    v: np.ndarray
    alpha: np.ndarray
    sigma_x: np.ndarray
    sigma_tilde: np.ndarray
    h_x: np.ndarray
    s: float


def _check_x(x):
    x = np.asarray(x, dtype=np.float64)
    if not np.any(x):
        raise ZeroVector("filter vector is zero")
    return x


def _v_tol(model, x):
    return 1e-14 * (1.0 + float(x @ x) * model._interp_fro_max)


def eval_v(model, x):
    x = _check_x(x)
    return (model.interp @ x) @ x


def _alpha_parts(model, x):
    """``(Vx, v, ||v||_W, alpha)``; ``alpha`` is None in the degenerate case."""
    Vx = model.interp @ x  # (m, n), row i is V_i x
    v = Vx @ x
    vnorm = float(np.sqrt(v @ (model.weights * v)))
    if model.radius == 0 or vnorm < _v_tol(model, x):
        return Vx, v, vnorm, None
    alpha = (model.orientation * model.radius / vnorm) * (model.weights * v)
    return Vx, v, vnorm, alpha


def eval_alpha(model, x):
    x = _check_x(x)
    _, _, _, alpha = _alpha_parts(model, x)
    return np.zeros(model.m) if alpha is None else alpha


def eval_sigma(model, x):
    """``Sigma(x)`` only; cheaper than :func:`eval_kernel`."""
    x = _check_x(x)
    _, _, _, alpha = _alpha_parts(model, x)
    if alpha is None:
        return model.average.copy()
    return model.average + np.tensordot(alpha, model.interp, axes=1)


def eval_s(model, x):
    x = _check_x(x)
    _, v, vnorm, alpha = _alpha_parts(model, x)
    base = float(x @ model.average @ x)
    if alpha is None:
        return base
    return base + model.orientation * model.radius * vnorm


def eval_kernel(model, x):
    x = _check_x(x)
    Vx, v, vnorm, alpha = _alpha_parts(model, x)
    n = model.n
    if alpha is None:
        sigma = model.average.copy()
        tilde = np.zeros((n, n))
        alpha = np.zeros(model.m)
    else:
        sigma = model.average + np.tensordot(alpha, model.interp, axes=1)
        G = 2.0 * Vx.T  # grad v, (n, m)
        GW = G * model.weights
        g = GW @ v  # grad v W v
        coef = model.orientation * model.radius / (2.0 * vnorm)
        tilde = coef * (GW @ G.T - np.outer(g, g) / vnorm**2)
        tilde = (tilde + tilde.T) / 2.0
    s = float(x @ sigma @ x)
    return KernelEval(x, v, alpha, sigma, tilde, sigma + tilde, s)


def grad_s(model, x):
    return 2.0 * eval_sigma(model, x) @ np.asarray(x, dtype=np.float64)


def _q_parts(pair, x):
    x = _check_x(x)
    s_own = eval_s(pair.own, x)
    s_other = eval_s(pair.other, x)
    den = s_own + s_other
    if not den > 0:
        raise NonpositiveDenominator(
            f"x'(Sigma_own + Sigma_other)x = {den:.3e} is not positive; "
            "the tolerance sets admit indefinite covariances"
        )
    return x, s_own, den


def eval_q(pair, x):
    _, s_own, den = _q_parts(pair, x)
    return s_own / den


def grad_q(pair, x):
    x, s_own, den = _q_parts(pair, x)
    q = s_own / den
    A = eval_sigma(pair.own, x)
    B = A + eval_sigma(pair.other, x)
    return (2.0 / den) * (A @ x - q * (B @ x))
