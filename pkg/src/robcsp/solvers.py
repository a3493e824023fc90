"""Principal spatial filter solvers.

``csp_filter``        plain CSP, one symmetric-definite pencil.
``optnrq_fp``         fixed-point iteration on the frozen covariance pencil.
``optnrq_nepv``       SCF on the Hessian pencil, smallest positive eigenvalue,
                      with Armijo backtracking when the SCF step does not descend.
``frobenius_minmax``  closed form for weighted Frobenius-ball tolerance sets.
"""
import warnings
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np

from . import kernel as K
from .errors import LineSearchFailed, NonpositiveDenominator, NotPositiveDefinite
from .linalg import (
    as_symmetric,
    cholesky,
    fix_signs,
    gen_eig_definite,
    pd_repair,
    pencil_spectrum,
    smallest_positive_pair,
)

OSCILLATION_TOL = 1e-10
Q_TIE = 64 * np.finfo(float).eps


@dataclass(frozen=True)
class SolveSettings:
    tol: float = 1e-8
    max_iter: int = 200
    mu: float = 0.01
    tau: float = 0.01
    max_backtracks: int = 60

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not 0 < self.mu < 1 or not 0 < self.tau < 1:
            raise ValueError("mu and tau must lie in (0, 1)")
        if self.max_iter < 1 or self.max_backtracks < 1:
            raise ValueError("max_iter and max_backtracks must be positive")


@dataclass
class SpatialFilter:
    x: np.ndarray
    objective: float
    eigenvalue: float
    converged: bool

    def to_dict(self):
        return {
            "x": [float(v) for v in self.x],
            "objective": float(self.objective),
            "eigenvalue": float(self.eigenvalue),
            "converged": bool(self.converged),
        }


@dataclass
class IterRecord:
    k: int
    q: float
    residual: float
    eigenvalue: Optional[float] = None
    step: Optional[float] = None
    backtracks: int = 0
    direction: Optional[str] = None
    line_search: bool = False


@dataclass
class SolveTrace:
    records: List[IterRecord] = field(default_factory=list)
    status: str = "max-iter"

    @property
    def iterations(self):
        """Number of eigensolves performed (records minus the terminal check)."""
        return max(len(self.records) - 1, 0)

    @property
    def line_searches(self):
        return sum(r.line_search for r in self.records)

    @property
    def objectives(self):
        return np.array([r.q for r in self.records])

    def to_dict(self):
        return {
            "status": self.status,
            "iterations": self.iterations,
            "line_searches": self.line_searches,
            "records": [asdict(r) for r in self.records],
        }


def relative_residual(A, B, x, lam):
    Ax = A @ x
    Bx = B @ x
    return float(np.linalg.norm(Ax - lam * Bx) / (np.linalg.norm(Ax) + abs(lam) * np.linalg.norm(Bx)))


def _unit(x):
    x = np.asarray(x, dtype=np.float64)
    nrm = np.linalg.norm(x)
    if nrm == 0:
        raise K.ZeroVector("initial filter is zero")
    return x / nrm


def _repair_floor(S):
    return 1e-10 * max(abs(np.trace(S)) / S.shape[0], np.finfo(float).tiny)


def csp_filter(sigma_own, sigma_other):
    """Principal CSP filter: minimizes ``x' S_own x / x' (S_own + S_other) x``."""
    sigma_own = as_symmetric(sigma_own, "sigma_own")
    sigma_other = as_symmetric(sigma_other, "sigma_other")
    cholesky(sigma_own)
    cholesky(sigma_other)
    lam, X = gen_eig_definite(sigma_own, sigma_own + sigma_other)
    x = fix_signs(X[:, 0] / np.linalg.norm(X[:, 0]))
    return SpatialFilter(x, float(lam[0]), float(lam[0]), True)


def default_x0(pair):
    """CSP solution on the tolerance-set centres."""
    return csp_filter(pair.own.average, pair.other.average).x


def _q_or_inf(pair, x):
    try:
        return K.eval_q(pair, x)
    except NonpositiveDenominator:
        return np.inf


def optnrq_fp(pair, x0=None, settings=SolveSettings()):
    """Fixed-point iteration: freeze ``Sigma(x_k)`` and solve the plain CSP pencil.

    Returns the converged iterate, or the iterate with the smallest objective
    seen when the iteration stalls, oscillates or runs out of iterations.
    """
    x = _unit(default_x0(pair) if x0 is None else x0)
    trace = SolveTrace()
    history = []
    best_q, best_x = np.inf, x
    lam = np.nan

    for k in range(settings.max_iter + 1):
        A = K.eval_sigma(pair.own, x)
        B = A + K.eval_sigma(pair.other, x)
        den = float(x @ B @ x)
        if not den > 0:
            raise NonpositiveDenominator(f"x'Bx = {den:.3e} at fixed-point iterate {k}")
        q = float(x @ A @ x) / den
        res = relative_residual(A, B, x, q)
        rec = IterRecord(k, q, res)
        trace.records.append(rec)
        if q < best_q:
            best_q, best_x = q, x
        if res < settings.tol:
            trace.status = "converged"
            return SpatialFilter(fix_signs(x), q, q, True), trace
        if k == settings.max_iter:
            break

        try:
            lams, X = gen_eig_definite(A, B)
        except NotPositiveDefinite:
            warnings.warn("frozen denominator not positive definite; clipping its spectrum", RuntimeWarning)
            lams, X = gen_eig_definite(A, pd_repair(B, _repair_floor(B)))
        lam = float(lams[0])
        x_new = X[:, 0] / np.linalg.norm(X[:, 0])
        rec.eigenvalue, rec.step, rec.direction = lam, 1.0, "scf"

        if any(
            min(np.linalg.norm(x_new - h), np.linalg.norm(x_new + h)) <= OSCILLATION_TOL
            for h in history
        ):
            trace.status = "oscillation-detected"
            history.append(x)
            x = x_new
            q_new = _q_or_inf(pair, x)
            if q_new < best_q:
                best_q, best_x = q_new, x
            break
        history.append(x)
        x = x_new

    return SpatialFilter(fix_signs(best_x), best_q, best_q, False), trace


def _hessian_pencil(pair, x):
    ko = K.eval_kernel(pair.own, x)
    kt = K.eval_kernel(pair.other, x)
    return ko.h_x, ko.h_x + kt.h_x


def optnrq_nepv(pair, x0=None, settings=SolveSettings()):
    """SCF iteration on the Hessian pencil with line search.

    Each step takes the eigenvector of the smallest positive eigenvalue of
    ``(H_own(x), H_own(x) + H_other(x))``. If that does not lower the
    objective, the sign of ``t = (lam - q) * x_new' B x`` picks a descent
    direction (steepest descent when ``|t| < tol``) and Armijo backtracking
    picks the step. Iterates are kept at unit 2-norm.

    Raises
    ------
    LineSearchFailed
        If ``max_backtracks`` reductions never satisfy the Armijo condition.
    NoPositiveEigenvalue
        If the Hessian pencil has no positive eigenvalue.
    """
    x = _unit(default_x0(pair) if x0 is None else x0)
    trace = SolveTrace()

    for k in range(settings.max_iter + 1):
        A, B = _hessian_pencil(pair, x)
        Bx = B @ x
        den = float(x @ Bx)
        if not den > 0:
            raise NonpositiveDenominator(f"x'Bx = {den:.3e} at SCF iterate {k}")
        Ax = A @ x
        # same evaluation as the trial points below, so ties compare exactly
        q = float(K.eval_q(pair, x))
        res = float(np.linalg.norm(Ax - q * Bx) / (np.linalg.norm(Ax) + q * np.linalg.norm(Bx)))
        rec = IterRecord(k, q, res)
        trace.records.append(rec)
        if res < settings.tol:
            trace.status = "converged"
            return SpatialFilter(fix_signs(x), q, q, True), trace
        if k == settings.max_iter:
            break

        try:
            lam, x_scf = smallest_positive_pair(A, B)
        except NotPositiveDefinite:
            warnings.warn("H_own is not positive definite; clipping its spectrum", RuntimeWarning)
            lam, x_scf = smallest_positive_pair(pd_repair(A, _repair_floor(A)), B)
        rec.eigenvalue = lam

        # a tie within the rounding error of q still counts as no increase
        tie = Q_TIE * (np.linalg.norm(A) + abs(q) * np.linalg.norm(B)) / den
        if _q_or_inf(pair, x_scf) <= q + tie:
            x_next = x_scf
            rec.step, rec.direction = 1.0, "scf"
        else:
            grad = (2.0 / den) * (Ax - q * Bx)
            t = (lam - q) * float(x_scf @ Bx)
            if abs(t) < settings.tol:
                d = -grad / float(grad @ grad)
                rec.direction = "steepest-descent"
            elif t > 0:
                d = -x_scf - x
                rec.direction = "scf-flipped"
            else:
                d = x_scf - x
                rec.direction = "scf"
            slope = float(d @ grad)
            beta = 1.0
            for _ in range(settings.max_backtracks):
                if _q_or_inf(pair, x + beta * d) <= q + settings.mu * beta * slope:
                    break
                beta *= settings.tau
                rec.backtracks += 1
            else:
                trace.status = "line-search-failed"
                raise LineSearchFailed(
                    f"Armijo condition not met after {settings.max_backtracks} reductions "
                    f"at iterate {k} (slope {slope:.3e})",
                    trace,
                )
            rec.step, rec.line_search = beta, True
            x_next = x + beta * d
        x = _unit(x_next)

    return SpatialFilter(fix_signs(x), q, q, False), trace


@dataclass
class VerificationReport:
    nepv_residual: float
    residual_ok: bool
    spectrum: np.ndarray
    smallest_positive: float
    position_ok: bool
    second_order_min: float
    second_order_ok: bool
    normalized_x: Optional[np.ndarray]

    @property
    def passed(self):
        return self.residual_ok and self.position_ok and self.second_order_ok

    def to_dict(self):
        return {
            "nepv_residual": self.nepv_residual,
            "residual_ok": self.residual_ok,
            "spectrum": [float(v) if np.isfinite(v) else None for v in self.spectrum],
            "smallest_positive": self.smallest_positive,
            "position_ok": self.position_ok,
            "second_order_min": self.second_order_min,
            "second_order_ok": self.second_order_ok,
            "normalized_x": None if self.normalized_x is None else [float(v) for v in self.normalized_x],
            "passed": self.passed,
        }


def verify_solution(pair, f, residual_tol=1e-7, position_rtol=1e-6, psd_tol=1e-8):
    """Check first-order, eigenvalue-ordering and second-order conditions at ``f.x``."""
    x = _unit(f.x)
    S_own = K.eval_sigma(pair.own, x)
    S = S_own + K.eval_sigma(pair.other, x)
    lam = float(f.eigenvalue)
    res = relative_residual(S_own, S, x, lam)

    A, B = _hessian_pencil(pair, x)
    lams, _ = pencil_spectrum(A, B)
    positive = lams[(lams > 0) & np.isfinite(lams)]
    smallest = float(positive[0]) if positive.size else np.nan
    position_ok = bool(positive.size) and abs(smallest - lam) <= position_rtol * max(abs(lam), 1.0)

    b = S @ x
    Q, _ = np.linalg.qr(np.column_stack([b, np.eye(len(x))]))
    Z = Q[:, 1:len(x)]
    M = Z.T @ (A - lam * B) @ Z
    second = float(np.min(np.linalg.eigvalsh((M + M.T) / 2.0))) if Z.shape[1] else 0.0

    xSx = float(x @ b)
    return VerificationReport(
        nepv_residual=res,
        residual_ok=res <= residual_tol,
        spectrum=lams,
        smallest_positive=smallest,
        position_ok=position_ok,
        second_order_min=second,
        second_order_ok=second >= -psd_tol,
        normalized_x=x / np.sqrt(xSx) if xSx > 0 else None,
    )


def frobenius_minmax(sigma_own, sigma_other, p_own, p_other, delta_own, delta_other):
    """Minmax CSP over weighted Frobenius balls, which has a closed-form worst case.

    The worst-case covariances are ``S_own + delta_own P_own`` and
    ``S_other - delta_other P_other``; the filter solves the resulting pencil.
    """
    sigma_own = as_symmetric(sigma_own, "sigma_own")
    sigma_other = as_symmetric(sigma_other, "sigma_other")
    checks = [
        ("p_own", as_symmetric(p_own, "p_own")),
        ("p_other", as_symmetric(p_other, "p_other")),
    ]
    worst_own = sigma_own + delta_own * checks[0][1]
    worst_other = sigma_other - delta_other * checks[1][1]
    checks += [
        ("sigma_own + delta_own * p_own", worst_own),
        ("sigma_other - delta_other * p_other", worst_other),
        ("pencil denominator", worst_own + worst_other),
    ]
    for name, M in checks:
        try:
            cholesky(M)
        except NotPositiveDefinite:
            raise NotPositiveDefinite(f"{name} is not positive definite") from None
    lam, X = gen_eig_definite(worst_own, worst_own + worst_other)
    x = fix_signs(X[:, 0] / np.linalg.norm(X[:, 0]))
    return SpatialFilter(x, float(lam[0]), float(lam[0]), True)
