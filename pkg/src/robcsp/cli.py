"""Command-line interface: ``robcsp {synth,fit,classify,trace}``."""
import argparse
import csv
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .errors import RobCSPError
from .io import dump_json, is_preprocessed, load_dataset, save_dataset
from .pipeline import METHODS, Prepared, fit_condition, fit_filters, score
from .solvers import SolveSettings, verify_solution
from .synth import SynthSpec, generate

SYNTH_DELTAS = (0.5, 1.0, 2.0, 4.0, 6.0, 8.0)
REAL_DELTAS = tuple(round(0.1 * i, 1) for i in range(1, 11))


def _settings(args):
    return SolveSettings(tol=args.tol, max_iter=args.max_iter, mu=args.mu, tau=args.tau)


def _settings_dict(s):
    return {"tol": s.tol, "max_iter": s.max_iter, "mu": s.mu, "tau": s.tau, "max_backtracks": s.max_backtracks}


def _delta_list(text):
    try:
        vals = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad delta grid {text!r}") from None
    if not vals or min(vals) < 0:
        raise argparse.ArgumentTypeError("delta grid must be nonempty and nonnegative")
    return vals


def _nonneg(text):
    v = float(text)
    if v < 0:
        raise argparse.ArgumentTypeError("delta must be nonnegative")
    return v


def cmd_synth(seed, out, test=False, trials=50, n=10, t=200):
    spec = SynthSpec.test_split(seed=seed, n=n, t=t, trials_per_condition=trials) if test else SynthSpec(
        seed=seed, n=n, t=t, trials_per_condition=trials
    )
    ts_m, ts_p = generate(spec)
    notes = {
        "generator": "linear-mixing",
        "seed": int(seed),
        "split": spec.split,
        "noise_var": spec.noise_var,
        "samples": t,
        "trials_per_condition": trials,
    }
    return save_dataset(ts_m, ts_p, out, preprocessed=False, notes=notes)


def cmd_fit(manifest, method, delta, m, settings, out):
    ts_m, ts_p = load_dataset(manifest)
    prep = Prepared(ts_m, ts_p, m=m, preprocessed=is_preprocessed(manifest))
    t0 = time.perf_counter()
    fits = fit_filters(prep, method, delta, settings)
    elapsed = time.perf_counter() - t0
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    report = {
        "version": __version__,
        "manifest": str(manifest),
        "method": method,
        "delta": delta,
        "m": m,
        "settings": _settings_dict(settings),
        "seconds": elapsed,
        "filters": {},
    }
    for cond, fit in fits.items():
        entry = {"filter": fit.filter.to_dict()}
        if fit.trace is not None:
            entry["trace"] = fit.trace.to_dict()
            _write_trace_csv(out / f"trace_{cond}.csv", [(method, fit.trace, None)])
            if fit.filter.converged and method == "nepv":
                entry["verification"] = verify_solution(fit.pair, fit.filter).to_dict()
        report["filters"][cond] = entry
    dump_json(report, out / "fit.json")
    return report


def _classify_one(task):
    seed, method, deltas, m, settings, train_kw = task
    tr = generate(SynthSpec(seed=seed, **train_kw))
    te = generate(SynthSpec.test_split(seed=seed, **train_kw))
    return _rates_for(tr, te, method, deltas, m, settings, preprocessed=False, seed=seed)


def _rates_for(tr, te, method, deltas, m, settings, preprocessed, seed=None):
    prep = Prepared(*tr, m=m, preprocessed=preprocessed)
    rows, summaries = [], []
    for delta in deltas:
        t0 = time.perf_counter()
        fits = fit_filters(prep, method, delta, settings)
        rate, clf = score(prep, tr, te, fits)
        summaries.append(
            {
                "seed": seed,
                "delta": delta,
                "rate": rate,
                "seconds": time.perf_counter() - t0,
                "lda": clf.to_dict(),
                "status": {c: (f.trace.status if f.trace else "direct") for c, f in fits.items()},
                "iterations": {c: (f.trace.iterations if f.trace else 0) for c, f in fits.items()},
            }
        )
        rows.append((seed, method, delta, rate))
    return rows, summaries


def cmd_classify(method, deltas, m, settings, out, train=None, test=None, seed=0, replicates=1, jobs=1):
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    if train is not None:
        pre = is_preprocessed(train)
        results = [_rates_for(load_dataset(train), load_dataset(test), method, deltas, m, settings, pre)]
        source = {"train": str(train), "test": str(test)}
    else:
        tasks = [(seed + r, method, tuple(deltas), m, settings, {}) for r in range(replicates)]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_classify_one, tasks))
        else:
            results = [_classify_one(t) for t in tasks]
        source = {"synthetic": True, "seed": seed, "replicates": replicates}
    rows = [r for res in results for r in res[0]]
    with open(out / "rates.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["seed", "method", "delta", "rate"])
        for seed_, meth, delta, rate in rows:
            w.writerow(["" if seed_ is None else seed_, meth, repr(float(delta)), repr(float(rate))])
    report = {
        "version": __version__,
        "source": source,
        "method": method,
        "deltas": list(deltas),
        "m": m,
        "settings": _settings_dict(settings),
        "runs": [s for res in results for s in res[1]],
        "mean_rate": {repr(float(d)): float(np.mean([r[3] for r in rows if r[2] == d])) for d in deltas},
        "seconds": time.perf_counter() - t0,
    }
    dump_json(report, out / "report.json")
    return report


def _write_trace_csv(path, runs):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["method", "k", "q", "residual", "error"])
        for method, trace, q_ref in runs:
            q_ref = trace.records[-1].q if q_ref is None else q_ref
            for r in trace.records:
                w.writerow([method, r.k, repr(r.q), repr(r.residual), repr(r.q - q_ref)])


def cmd_trace(manifest, methods, delta, m, settings, out, condition="minus"):
    """Per-iteration objective traces; errors are measured against the nepv optimum."""
    ts_m, ts_p = load_dataset(manifest)
    prep = Prepared(ts_m, ts_p, m=m, preprocessed=is_preprocessed(manifest))
    traces = {meth: fit_condition(prep, condition, meth, delta, settings).trace for meth in methods}
    ref = fit_condition(prep, condition, "nepv", delta, settings) if "nepv" not in traces else None
    q_ref = (ref.trace if ref else traces["nepv"]).records[-1].q
    _write_trace_csv(out, [(meth, tr, q_ref) for meth, tr in traces.items()])
    return traces


def build_parser():
    p = argparse.ArgumentParser(prog="robcsp", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def solver_flags(sp):
        sp.add_argument("--m", type=int, default=10, help="number of interpolation matrices")
        sp.add_argument("--tol", type=float, default=1e-8)
        sp.add_argument("--max-iter", type=int, default=200)
        sp.add_argument("--mu", type=float, default=0.01)
        sp.add_argument("--tau", type=float, default=0.01)

    s = sub.add_parser("synth", help="generate a synthetic dataset")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--test", action="store_true", help="test split (noise variance 30)")
    s.add_argument("--trials", type=int, default=50)
    s.add_argument("--channels", type=int, default=10)
    s.add_argument("--samples", type=int, default=200)

    f = sub.add_parser("fit", help="fit both principal filters")
    f.add_argument("--manifest", required=True)
    f.add_argument("--method", choices=METHODS, default="nepv")
    f.add_argument("--delta", type=_nonneg, default=0.0)
    f.add_argument("--out", required=True)
    solver_flags(f)

    c = sub.add_parser("classify", help="classification rates over a delta grid")
    c.add_argument("--train")
    c.add_argument("--test")
    c.add_argument("--method", choices=METHODS, default="nepv")
    c.add_argument("--delta-grid", type=_delta_list, default=None)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--replicates", type=int, default=1)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--out", required=True)
    solver_flags(c)

    t = sub.add_parser("trace", help="per-iteration convergence traces")
    t.add_argument("--manifest", required=True)
    t.add_argument("--method", dest="methods", default="nepv,fp")
    t.add_argument("--delta", type=_nonneg, required=True)
    t.add_argument("--condition", choices=("minus", "plus"), default="minus")
    t.add_argument("--out", required=True)
    solver_flags(t)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "synth":
            path = cmd_synth(args.seed, args.out, args.test, args.trials, args.channels, args.samples)
            print(path)
        elif args.command == "fit":
            report = cmd_fit(args.manifest, args.method, args.delta, args.m, _settings(args), args.out)
            for cond, entry in report["filters"].items():
                print(f"{cond}: objective={entry['filter']['objective']:.10g} converged={entry['filter']['converged']}")
        elif args.command == "classify":
            if (args.train is None) != (args.test is None):
                parser.error("--train and --test go together")
            deltas = args.delta_grid or (SYNTH_DELTAS if args.train is None else REAL_DELTAS)
            report = cmd_classify(
                args.method, deltas, args.m, _settings(args), args.out,
                train=args.train, test=args.test, seed=args.seed,
                replicates=args.replicates, jobs=args.jobs,
            )
            for d, rate in report["mean_rate"].items():
                print(f"delta={d} mean_rate={rate:.4f}")
        elif args.command == "trace":
            methods = [m.strip() for m in args.methods.split(",") if m.strip()]
            bad = [m for m in methods if m not in ("fp", "nepv")]
            if bad:
                parser.error(f"trace supports fp and nepv, got {bad}")
            cmd_trace(args.manifest, methods, args.delta, args.m, _settings(args), args.out, args.condition)
            print(args.out)
    except (RobCSPError, ValueError, OSError) as exc:
        err = exc.to_dict() if isinstance(exc, RobCSPError) else {"error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(json.dumps(err) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
