"""Dense symmetric linear algebra.

Cholesky factorization, symmetric eigendecomposition (cyclic Jacobi, compiled
when available), symmetric-definite pencils, smallest-positive eigenpairs of
pencils with an indefinite second member, and positive-definiteness repair.
"""
from typing import NamedTuple

import numpy as np
from scipy.linalg import solve_triangular

from ._backend import cholesky_raw, jacobi_eigh
from .errors import NonFinite, NoPositiveEigenvalue, NotPositiveDefinite

CHOL_EPS = 1e-13
MU_TOL = 1e-12


class EigenPairs(NamedTuple):
    """Ascending eigenvalues with paired eigenvectors as columns."""

    values: np.ndarray
    vectors: np.ndarray


def as_symmetric(S, name="matrix"):
    """Validate a square finite matrix and return ``(S + S.T) / 2``."""
    S = np.asarray(S, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"{name} must be square, got shape {S.shape}")
    if not np.all(np.isfinite(S)):
        raise NonFinite(f"{name} contains NaN or Inf")
    return (S + S.T) / 2.0


def fix_signs(V):
    """Make the largest-magnitude entry of every column nonnegative.

    Ties go to the lowest index (``argmax`` returns the first maximum).
    """
    V = np.array(V, dtype=np.float64, copy=True)
    if V.ndim == 1:
        i = int(np.argmax(np.abs(V)))
        return -V if V[i] < 0 else V
    idx = np.argmax(np.abs(V), axis=0)
    flip = V[idx, np.arange(V.shape[1])] < 0
    V[:, flip] *= -1.0
    return V


def cholesky(S):
    """Lower-triangular ``L`` with ``L @ L.T == S``.

    Raises
    ------
    NotPositiveDefinite
        If a pivot drops to ``1e-13 * max(diag(S))`` or below.
    """
    S = as_symmetric(S)
    L, j = cholesky_raw(np.ascontiguousarray(S), CHOL_EPS)
    if L is None:
        raise NotPositiveDefinite(f"Cholesky pivot {j} is not positive")
    return L


def sym_eig(S):
    """Full eigendecomposition of a symmetric matrix, ascending."""
    S = as_symmetric(S)
    w, V, _ = jacobi_eigh(np.ascontiguousarray(S))
    order = np.argsort(w, kind="stable")
    return EigenPairs(w[order], fix_signs(V[:, order]))


def _congruence(L, A):
    """``L^{-1} A L^{-T}``, symmetrized."""
    Y = solve_triangular(L, A, lower=True)
    C = solve_triangular(L, Y.T, lower=True)
    return (C + C.T) / 2.0


def gen_eig_definite(A, B):
    """All eigenpairs of ``A x = lam B x`` with ``B`` positive definite.

    Eigenvectors are ``B``-orthonormal and sorted by ascending eigenvalue.
    """
    A = as_symmetric(A, "A")
    L = cholesky(B)
    mu, Y = sym_eig(_congruence(L, A))
    X = solve_triangular(L.T, Y, lower=False)
    return EigenPairs(mu, fix_signs(X))


def pencil_spectrum(A, B):
    """Eigenvalues of ``A x = lam B x`` for ``A`` positive definite and ``B`` indefinite.

    Reduces with ``A = L L^T`` to ``L^{-1} B L^{-T} y = mu y`` so ``lam = 1/mu``.
    Returns ``(lams, X)`` with eigenvalues ascending (``inf`` where
    ``|mu| <= MU_TOL``) and unit 2-norm eigenvectors in matching columns.
    """
    L = cholesky(A)
    mu, Y = sym_eig(_congruence(L, as_symmetric(B, "B")))
    X = solve_triangular(L.T, Y, lower=False)
    X = fix_signs(X / np.linalg.norm(X, axis=0))
    with np.errstate(divide="ignore"):
        lams = np.where(np.abs(mu) > MU_TOL, 1.0 / np.where(mu == 0, 1.0, mu), np.inf)
    order = np.argsort(lams, kind="stable")
    return lams[order], X[:, order]


def smallest_positive_pair(A, B):
    """Eigenpair of ``A x = lam B x`` with the smallest positive ``lam``.

    ``A`` must be positive definite; ``B`` may be indefinite. The smallest
    positive ``lam`` is the reciprocal of the largest positive eigenvalue of
    ``L^{-1} B L^{-T}``. The vector is returned with unit 2-norm.

    Raises
    ------
    NotPositiveDefinite
        If ``A`` is not positive definite.
    NoPositiveEigenvalue
        If no reduced eigenvalue exceeds ``MU_TOL``.
    """
    L = cholesky(A)
    mu, Y = sym_eig(_congruence(L, as_symmetric(B, "B")))
    if mu[-1] <= MU_TOL:
        raise NoPositiveEigenvalue("pencil has no positive finite eigenvalue")
    x = solve_triangular(L.T, Y[:, -1], lower=False)
    x = fix_signs(x / np.linalg.norm(x))
    return 1.0 / mu[-1], x


def pd_repair(S, floor):
    """Clip eigenvalues below ``floor`` up to ``floor``.

    A matrix whose spectrum already sits at or above ``floor`` is returned
    unchanged.
    """
    if not floor > 0:
        raise ValueError("floor must be positive")
    S = as_symmetric(S)
    w, V = sym_eig(S)
    if w[0] >= floor:
        return S
    w = np.maximum(w, floor)
    R = (V * w) @ V.T
    return (R + R.T) / 2.0
