"""Dataset files: one CSV per trial plus a JSON manifest.

Trial CSVs have one row per channel, one column per time sample, no header,
and 17 significant digits so floats round-trip exactly. Manifest paths are
relative to the manifest's directory.
"""
import csv
import json
import os
from pathlib import Path

import numpy as np

from .covariance import TrialSet
from .errors import ParseError, ShapeMismatch

FORMAT_VERSION = 1
MANIFEST_NAME = "manifest.json"


def write_matrix_csv(path, M):
    M = np.atleast_2d(np.asarray(M, dtype=np.float64))
    with open(path, "w", newline="") as fh:
        for row in M:
            fh.write(",".join(format(float(v), ".17g") for v in row))
            fh.write("\n")


def read_matrix_csv(path):
    path = Path(path)
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise ParseError(f"{path}: cannot open ({exc.strerror})") from None
    rows = []
    with fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            try:
                rows.append([float(tok) for tok in row])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: non-numeric entry") from None
            if len(rows[-1]) != len(rows[0]):
                raise ParseError(f"{path}:{lineno}: expected {len(rows[0])} columns, got {len(row)}")
    if not rows:
        raise ParseError(f"{path}: empty file")
    return np.array(rows)


def save_dataset(ts_minus, ts_plus, out_dir, preprocessed=False, notes=None):
    """Write both trial sets under ``out_dir`` and return the manifest path."""
    out_dir = Path(out_dir)
    files = {}
    for ts in (ts_minus, ts_plus):
        cond_dir = out_dir / ts.condition
        cond_dir.mkdir(parents=True, exist_ok=True)
        names = []
        for i, Y in enumerate(ts.trials):
            rel = f"{ts.condition}/trial_{i:04d}.csv"
            write_matrix_csv(out_dir / rel, Y)
            names.append(rel)
        files[ts.condition] = names
    manifest = {
        "format_version": FORMAT_VERSION,
        "channels": int(ts_minus.n_channels),
        "preprocessed": bool(preprocessed),
        "conditions": files,
        "notes": notes or {},
    }
    path = out_dir / MANIFEST_NAME
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def read_manifest(path):
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST_NAME
    try:
        with open(path) as fh:
            manifest = json.load(fh)
    except OSError as exc:
        raise ParseError(f"{path}: cannot open ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None
    for key in ("format_version", "channels", "conditions"):
        if key not in manifest:
            raise ParseError(f"{path}: manifest lacks {key!r}")
    if manifest["format_version"] != FORMAT_VERSION:
        raise ParseError(f"{path}: unsupported format version {manifest['format_version']}")
    return path, manifest


def load_dataset(manifest_path):
    """Load ``(minus, plus)`` trial sets described by a manifest."""
    path, manifest = read_manifest(manifest_path)
    base = path.parent
    n = int(manifest["channels"])
    sets = []
    for cond in ("minus", "plus"):
        names = manifest["conditions"].get(cond)
        if not names:
            raise ParseError(f"{path}: no trials listed for condition {cond!r}")
        trials = [read_matrix_csv(base / name) for name in names]
        for name, Y in zip(names, trials):
            if Y.shape[0] != n:
                raise ShapeMismatch(f"{base / name}: {Y.shape[0]} channels, manifest says {n}")
            if Y.shape[1] != trials[0].shape[1]:
                raise ShapeMismatch(f"{base / name}: sample count differs within condition {cond!r}")
        sets.append(TrialSet(cond, np.stack(trials)))
    return sets[0], sets[1]


def is_preprocessed(manifest_path):
    return bool(read_manifest(manifest_path)[1].get("preprocessed", False))


def dump_json(obj, path):
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")
    os.replace(tmp, path)


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"cannot serialize {type(o).__name__}")
