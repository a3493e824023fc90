"""Dataset-level orchestration: both principal filters, features, LDA, rates."""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .classify import classification_rate, fit_lda, log_variance
from .covariance import build_tolerance_model, center_scale_trial, covariance_ensemble
from .kernel import KernelPair
from .solvers import (
    SolveSettings,
    SolveTrace,
    SpatialFilter,
    csp_filter,
    frobenius_minmax,
    optnrq_fp,
    optnrq_nepv,
)

METHODS = ("csp", "fp", "nepv", "frob")


@dataclass
class FilterFit:
    condition: str
    filter: SpatialFilter
    trace: Optional[SolveTrace]
    pair: Optional[KernelPair]


class Prepared:
    """Covariance ensembles and tolerance models of a two-condition dataset."""

    def __init__(self, ts_minus, ts_plus, m=10, preprocessed=False):
        self.preprocessed = preprocessed
        self.ensembles = {
            "minus": covariance_ensemble(ts_minus, preprocessed),
            "plus": covariance_ensemble(ts_plus, preprocessed),
        }
        self.models = {c: build_tolerance_model(ce, m, 0.0) for c, ce in self.ensembles.items()}

    def pair(self, own, delta):
        other = "plus" if own == "minus" else "minus"
        return KernelPair(
            self.models[own].with_radius(delta).with_orientation(1),
            self.models[other].with_radius(delta).with_orientation(-1),
        )


def fit_condition(prep, own, method, delta, settings=SolveSettings()):
    other = "plus" if own == "minus" else "minus"
    avg_own = prep.ensembles[own].average
    avg_other = prep.ensembles[other].average
    if method == "csp":
        return FilterFit(own, csp_filter(avg_own, avg_other), None, None)
    if method == "frob":
        eye = np.eye(avg_own.shape[0])
        return FilterFit(own, frobenius_minmax(avg_own, avg_other, eye, eye, delta, delta), None, None)
    pair = prep.pair(own, delta)
    x0 = csp_filter(avg_own, avg_other).x
    solve = {"fp": optnrq_fp, "nepv": optnrq_nepv}[method]
    f, trace = solve(pair, x0, settings)
    return FilterFit(own, f, trace, pair)


def fit_filters(prep, method, delta, settings=SolveSettings()):
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    return {c: fit_condition(prep, c, method, delta, settings) for c in ("minus", "plus")}


def features(trials, fits, preprocessed=False):
    Y = trials if preprocessed else center_scale_trial(trials)
    return log_variance(Y, fits["minus"].filter.x, fits["plus"].filter.x)


def score(train_prep, train_sets, test_sets, fits):
    tr_m, tr_p = train_sets
    te_m, te_p = test_sets
    pre = train_prep.preprocessed
    clf = fit_lda(features(tr_m.trials, fits, pre), features(tr_p.trials, fits, pre))
    rate = classification_rate(clf, features(te_m.trials, fits, pre), features(te_p.trials, fits, pre))
    return rate, clf
