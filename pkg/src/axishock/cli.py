"""Command line front end.

    axishock solve-1d            background shock for the configured exit pressure
    axishock sweep-pressure      shock position over a list of exit pressures
    axishock solve-2d            perturbed axisymmetric solve with verification
    axishock verify RUN_DIR      residual checks of a solve-2d directory against thresholds
    axishock convergence-study   solve-2d over several grids and residual ratios

Exit codes: 0 success, 2 admissibility, 3 divergence, 4 verification failure,
5 configuration or I/O error, 1 any other library error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .config import RunConfig, load_config
from .errors import AdmissibilityError, AxishockError, ConfigError, DivergenceError
from .io import load_fields, save_fields, write_csv, write_json, write_manifest
from .pipeline import run_2d, solve_background
from .verify import EULER_KEYS, check_thresholds, verify_all

log = logging.getLogger("axishock")

EXIT_OK, EXIT_ADMISSIBILITY, EXIT_DIVERGENCE, EXIT_VERIFY, EXIT_IO = 0, 2, 3, 4, 5


def _outdir(path) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {out}: {exc}") from exc
    return out


def _parse_grid(text: str | None):
    if text is None:
        return None, None
    try:
        a, b = text.lower().split("x")
        return int(a), int(b)
    except ValueError as exc:
        raise ConfigError(f"--grid expects N1xN2, got {text!r}") from exc


def _parse_levels(text: str):
    return [list(_parse_grid(t.strip())) for t in text.split(",") if t.strip()]


# ------------------------------------------------------------------ commands

def cmd_solve_1d(cfg: RunConfig, out: Path) -> int:
    bg = solve_background(cfg)
    files = []
    for name, br in (("background_supersonic", bg.supersonic), ("background_subsonic", bg.subsonic)):
        files.append(write_csv(out / f"{name}.csv", br.table()))
    summary = {"Lb": bg.Lb, "bracket": list(bg.bracket), "mass_flux": bg.mass_flux,
               "exit_pressure": bg.exit_pressure, "pressure_jump": bg.pressure_jump(),
               "L1": bg.L1, "L2": bg.L2, "gamma": bg.gas.gamma}
    files.append(write_json(out / "summary.json", summary))
    write_manifest(out, "solve-1d", cfg.to_dict(), files)
    print(f"Lb = {bg.Lb:.12f}   bracket = ({bg.bracket[0]:.10g}, {bg.bracket[1]:.10g})")
    return EXIT_OK


def _sweep_entry(args):
    cfg_dict, pressure = args
    cfg = RunConfig(**cfg_dict)
    try:
        return pressure, cfg.background_problem().solve(pressure).Lb, None
    except AdmissibilityError as exc:
        return pressure, float("nan"), str(exc)


def cmd_sweep_pressure(cfg: RunConfig, out: Path, pressures=None, jobs: int = 1) -> int:
    problem = cfg.background_problem()
    P1, P2 = problem.admissible_bracket()
    if pressures is None:
        pressures = cfg.pressures or list(P1 + (P2 - P1) * np.arange(1, cfg.sweep_points + 1)
                                          / (cfg.sweep_points + 1))
    tasks = [(cfg.to_dict(), float(p)) for p in pressures]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_sweep_entry, tasks))
    else:
        results = [_sweep_entry(t) for t in tasks]
    rows = [(p, L) for p, L, err in results if err is None]
    for p, _, err in results:
        if err is not None:
            log.warning("skipping exit pressure %.10g: %s", p, err)
    rows.sort()
    P = np.array([r[0] for r in rows])
    L = np.array([r[1] for r in rows])
    files = [write_csv(out / "sweep.csv", {"P_e": P, "Lb": L})]
    monotone = bool(np.all(np.diff(L) < 0)) if L.size > 1 else True
    files.append(write_json(out / "summary.json", {"bracket": [P1, P2], "n": int(L.size),
                                                   "skipped": len(results) - len(rows),
                                                   "monotone_decreasing": monotone}))
    write_manifest(out, "sweep-pressure", cfg.to_dict(), files)
    for p, x in rows:
        print(f"P_e = {p:.10g}   Lb = {x:.12f}")
    return EXIT_OK


def _iteration_log(rep) -> dict:
    d = rep.as_dict()
    d.pop("seconds", None)     # keep artefacts deterministic
    return d


def cmd_solve_2d(cfg: RunConfig, out: Path) -> int:
    try:
        run = run_2d(cfg)
    except DivergenceError as exc:
        hist = list(exc.history)
        ratios = [hist[k + 1] / hist[k] for k in range(len(hist) - 1) if hist[k] > 0]
        write_json(out / "iterations.json", {"converged": False, "history": hist, "ratios": ratios,
                                             "message": str(exc)})
        print(f"divergence: {exc}", file=sys.stderr)
        print("update ratios: " + " ".join(f"{r:.3g}" for r in ratios), file=sys.stderr)
        return EXIT_DIVERGENCE
    files = save_fields(out, run.fields)
    files.append(write_json(out / "iterations.json", _iteration_log(run.report)))
    ver = run.verification
    files.append(write_json(out / "verification.json", {"values": ver.values, "l2": ver.l2, "h": ver.h}))
    files.append(write_json(out / "summary.json", run.summary()))
    write_manifest(out, "solve-2d", cfg.to_dict(), files)
    print(f"converged in {run.report.iterations} iterations, contraction {run.report.contraction:.3g}, "
          f"max |xi - Lb| = {run.fields.shock_displacement:.3e}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig, rundir: Path, out: Path) -> int:
    fields = load_fields(rundir)
    rep = verify_all(fields)
    limits = cfg.thresholds(rep.h, rep.values)
    failed = check_thresholds(rep, limits)
    write_json(out / "verify_report.json", {"values": rep.values, "h": rep.h, "thresholds": limits,
                                            "failed": failed, "passed": not failed})
    if failed:
        print("verification failed: " + ", ".join(failed))
        return EXIT_VERIFY
    print(f"verification passed ({len(limits)} checks, h = {rep.h:.4g})")
    return EXIT_OK


def _study_entry(cfg_dict):
    cfg = RunConfig(**cfg_dict)
    run = run_2d(cfg)
    return run.verification.flat(), run.summary()


def cmd_convergence_study(cfg: RunConfig, out: Path, levels=None, jobs: int = 1) -> int:
    levels = levels or cfg.levels
    tasks = []
    for n1, n2 in levels:
        d = cfg.to_dict()
        d.update(n1=int(n1), n2=int(n2), nx=None, nr=None)
        tasks.append(d)
    try:
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                results = list(ex.map(_study_entry, tasks))
        else:
            results = [_study_entry(t) for t in tasks]
    except DivergenceError as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    keys = sorted(set.intersection(*(set(r[0]) for r in results)) - {"h"})
    cols = {"n1": [int(t["n1"]) for t in tasks], "n2": [int(t["n2"]) for t in tasks],
            "h": [r[0]["h"] for r in results]}
    cols.update({k: [r[0][k] for r in results] for k in keys})
    files = [write_csv(out / "convergence.csv", cols)]
    ratios = {}
    for k in keys:
        v = np.array(cols[k], dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios[k] = (v[:-1] / v[1:]).tolist()
    files.append(write_json(out / "ratios.json", ratios))
    files.append(write_json(out / "summary.json", {"levels": [list(map(int, lv)) for lv in levels],
                                                   "runs": [r[1] for r in results]}))
    write_manifest(out, "convergence-study", cfg.to_dict(), files)
    for k in [k for k in (*EULER_KEYS, "rh_1", "rh_2", "rh_3", "rh_4") if k in ratios]:
        print(f"{k:14s} " + " ".join(f"{x:.3e}" for x in cols[k])
              + "   ratios " + " ".join(f"{x:.2f}" for x in ratios[k]))
    return EXIT_OK


# ------------------------------------------------------------------ entry point

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="TOML run configuration")
    common.add_argument("--out", type=Path, default=None, help="output directory")
    common.add_argument("--grid", default=None, help="downstream grid N1xN2")
    common.add_argument("--sigma", type=float, default=None, help="perturbation amplitude")
    common.add_argument("--backend", choices=("fd", "modes"), default=None, help="elliptic backend")
    common.add_argument("--jobs", type=int, default=1, help="parallel workers for sweeps and studies")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="axishock", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("solve-1d", parents=[common], help="1-D background shock")
    sp = sub.add_parser("sweep-pressure", parents=[common], help="shock position against exit pressure")
    sp.add_argument("--pressures", default=None, help="comma separated exit pressures")
    sub.add_parser("solve-2d", parents=[common], help="perturbed axisymmetric solve")
    vp = sub.add_parser("verify", parents=[common], help="check a solve-2d directory")
    vp.add_argument("rundir", type=Path)
    cp = sub.add_parser("convergence-study", parents=[common], help="refinement study")
    cp.add_argument("--levels", default=None, help="comma separated N1xN2 list, e.g. 64x32,128x64")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        n1, n2 = _parse_grid(args.grid)
        cfg = cfg.replace(n1=n1, n2=n2, sigma=args.sigma, backend=args.backend)
        if args.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        if args.command == "verify":
            out = _outdir(args.out or args.rundir)
            return cmd_verify(cfg, args.rundir, out)
        out = _outdir(args.out or cfg.out)
        if args.command == "solve-1d":
            return cmd_solve_1d(cfg, out)
        if args.command == "sweep-pressure":
            pressures = None
            if args.pressures:
                try:
                    pressures = [float(s) for s in args.pressures.split(",") if s.strip()]
                except ValueError as exc:
                    raise ConfigError(f"--pressures: {exc}") from exc
            return cmd_sweep_pressure(cfg, out, pressures, args.jobs)
        if args.command == "solve-2d":
            return cmd_solve_2d(cfg, out)
        if args.command == "convergence-study":
            levels = _parse_levels(args.levels) if args.levels else None
            return cmd_convergence_study(cfg, out, levels, args.jobs)
    except AdmissibilityError as exc:
        msg = str(exc)
        if exc.bracket is not None and "bracket" not in msg:
            msg += f"; admissible exit pressures lie in ({exc.bracket[0]:.10g}, {exc.bracket[1]:.10g})"
        print(f"admissibility error: {msg}", file=sys.stderr)
        return EXIT_ADMISSIBILITY
    except DivergenceError as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except AxishockError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", 1)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 1


if __name__ == "__main__":
    sys.exit(main())
