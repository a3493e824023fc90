"""Robust minmax common spatial patterns via eigenvector-dependent eigenproblems."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .classify import LdaClassifier, classification_rate, fit_lda, log_variance
from .covariance import (
    CovarianceEnsemble,
    ToleranceModel,
    TrialSet,
    build_tolerance_model,
    center_scale_trial,
    covariance_ensemble,
)
from .kernel import (
    KernelEval,
    KernelPair,
    eval_alpha,
    eval_kernel,
    eval_q,
    eval_v,
    grad_q,
    grad_s,
)
from .linalg import (
    EigenPairs,
    cholesky,
    gen_eig_definite,
    pd_repair,
    smallest_positive_pair,
    sym_eig,
)
from .solvers import (
    SolveSettings,
    SolveTrace,
    SpatialFilter,
    VerificationReport,
    csp_filter,
    frobenius_minmax,
    optnrq_fp,
    optnrq_nepv,
    verify_solution,
)
from .synth import SynthSpec, generate, random_rotation

__all__ = [
    "__version__",
    "BACKEND",
    "LdaClassifier",
    "classification_rate",
    "fit_lda",
    "log_variance",
    "CovarianceEnsemble",
    "ToleranceModel",
    "TrialSet",
    "build_tolerance_model",
    "center_scale_trial",
    "covariance_ensemble",
    "KernelEval",
    "KernelPair",
    "eval_alpha",
    "eval_kernel",
    "eval_q",
    "eval_v",
    "grad_q",
    "grad_s",
    "EigenPairs",
    "cholesky",
    "gen_eig_definite",
    "pd_repair",
    "smallest_positive_pair",
    "sym_eig",
    "SolveSettings",
    "SolveTrace",
    "SpatialFilter",
    "VerificationReport",
    "csp_filter",
    "frobenius_minmax",
    "optnrq_fp",
    "optnrq_nepv",
    "verify_solution",
    "SynthSpec",
    "generate",
    "random_rotation",
]
