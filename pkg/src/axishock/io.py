"""CSV/JSON emission, field round trips and the run manifest.

Floats are written with 17 significant digits so that reading a CSV back
reproduces the binary values exactly.
"""
from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

from .errors import AxishockError
from .fields import BLOCK_FIELDS, FieldBlock, PhysicalFields
from .gas import GasLaw

FLOAT_FORMAT = "%.17g"


class RunIOError(AxishockError):
    """Missing or unreadable run artefacts."""

    exit_code = 5


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return FLOAT_FORMAT % float(v)


def write_csv(path: str | Path, columns: dict) -> Path:
    """Columns in the given order, header row first."""
    path = Path(path)
    names = list(columns)
    cols = [np.atleast_1d(np.asarray(columns[n])).ravel() for n in names]
    n = {c.size for c in cols}
    if len(n) != 1:
        raise ValueError(f"columns of {path.name} differ in length")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in zip(*cols):
            w.writerow([_fmt(v) for v in row])
    return path


def read_csv(path: str | Path) -> dict:
    path = Path(path)
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise RunIOError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise RunIOError(f"{path} is empty")
    names, body = rows[0], rows[1:]
    data = np.array(body, dtype=float).reshape(len(body), len(names))
    return {n: data[:, k] for k, n in enumerate(names)}


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


def write_json(path: str | Path, obj) -> Path:
    path = Path(path)
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_json_default, allow_nan=True)
        fh.write("\n")
    return path


def read_json(path: str | Path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise RunIOError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise RunIOError(f"invalid JSON in {path}: {exc}") from exc


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(outdir: str | Path, command: str, config: dict, files) -> Path:
    """Config echo plus sha256 of every artefact; no timestamps, so reruns are identical."""
    outdir = Path(outdir)
    arts = {Path(f).name: sha256_file(f) for f in sorted(files, key=lambda p: Path(p).name)}
    return write_json(outdir / "manifest.json", {"command": command, "config": config, "artifacts": arts})


def verify_manifest(outdir: str | Path) -> list[str]:
    """Names of artefacts whose hash no longer matches the manifest."""
    outdir = Path(outdir)
    man = read_json(outdir / "manifest.json")
    bad = []
    for name, digest in man["artifacts"].items():
        p = outdir / name
        if not p.exists() or sha256_file(p) != digest:
            bad.append(name)
    return bad


# ------------------------------------------------------------ physical fields

def save_fields(outdir: str | Path, fields: PhysicalFields) -> list[Path]:
    outdir = Path(outdir)
    files = []
    for blk in (fields.upstream, fields.downstream):
        ii, jj = np.indices(blk.shape)
        cols = {"i": ii.ravel(), "j": jj.ravel(), **blk.table()}
        files.append(write_csv(outdir / f"{blk.name}.csv", cols))
    files.append(write_csv(outdir / "shock.csv", {"r": fields.shock_r, "x": fields.shock_x}))
    meta = {"gamma": fields.gas.gamma, "sigma": fields.sigma, "L1": fields.L1, "L2": fields.L2,
            "Lb": fields.Lb, "upstream_shape": list(fields.upstream.shape),
            "downstream_shape": list(fields.downstream.shape),
            "meta": {k: v for k, v in fields.meta.items() if k != "grid"}}
    files.append(write_json(outdir / "fields.json", meta))
    return files


def load_fields(rundir: str | Path) -> PhysicalFields:
    rundir = Path(rundir)
    for name in ("fields.json", "upstream.csv", "downstream.csv", "shock.csv"):
        if not (rundir / name).exists():
            raise RunIOError(f"{rundir} has no {name}; is it a solve-2d output directory?")
    meta = read_json(rundir / "fields.json")
    blocks = {}
    for name in ("upstream", "downstream"):
        tab = read_csv(rundir / f"{name}.csv")
        missing = [k for k in BLOCK_FIELDS if k not in tab]
        if missing:
            raise RunIOError(f"{name}.csv lacks columns {missing}")
        blocks[name] = FieldBlock.from_table(name, tab, tuple(meta[f"{name}_shape"]))
    shock = read_csv(rundir / "shock.csv")
    return PhysicalFields(GasLaw(meta["gamma"]), meta["sigma"], meta["L1"], meta["L2"], meta["Lb"],
                          blocks["upstream"], blocks["downstream"], shock["r"], shock["x"],
                          meta.get("meta", {}))
