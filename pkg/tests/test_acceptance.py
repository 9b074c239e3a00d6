"""Acceptance criteria 1-9.

Each criterion prints one PASS/FAIL line (collected in the terminal summary
under pytest).  Run this file directly to print the lines without pytest:

    python3 tests/test_acceptance.py
"""
from __future__ import annotations

import sys
import time
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))
from conftest import ACCEPTANCE_LINES  # noqa: E402

from axishock.background1d import BackgroundProblem, ForceProfile, State1D  # noqa: E402
from axishock.config import RunConfig  # noqa: E402
from axishock.gas import GasLaw  # noqa: E402
from axishock.pipeline import run_2d, solve_background  # noqa: E402
from axishock.subsonic import FDEllipticSolver, Grid, ModeEllipticSolver, neumann_disk_eigenvalues  # noqa: E402
from axishock.subsonic import compute_coefficients  # noqa: E402
from axishock.transform import MassGeometry  # noqa: E402
from axishock.verify import EULER_KEYS, _lagrange_derivative, through_origin_fit  # noqa: E402

SIGMAS = (1e-3, 2e-3, 4e-3)
REF_GRID = (128, 64)
FINE_GRID = (256, 128)


# ------------------------------------------------------------------ shared runs

@lru_cache(maxsize=None)
def config() -> RunConfig:
    return RunConfig()


@lru_cache(maxsize=None)
def background():
    return solve_background(config())


@lru_cache(maxsize=None)
def run(sigma: float, grid=REF_GRID):
    return run_2d(config().replace(n1=grid[0], n2=grid[1], sigma=sigma), background())


def record(number: int, ok: bool, detail: str) -> bool:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


# ------------------------------------------------------------------ criteria

def criterion_1() -> bool:
    t0 = time.perf_counter()
    prob = config().background_problem()
    errs = []
    for s in np.linspace(0.2, 1.8, 5):
        errs.append(abs(prob.solve(prob.exit_pressure_of_shock_position(s)).Lb - s))
    secs = time.perf_counter() - t0
    err = max(errs)
    return record(1, err < 1e-7 and secs < 10, f"1-D round trip max |dLb| = {err:.2e} (< 1e-7), {secs:.1f} s (< 10 s)")


def criterion_2() -> bool:
    t0 = time.perf_counter()
    prob = config().background_problem()
    P1, P2 = prob.admissible_bracket()
    inset = 1e-6 * (P2 - P1)        # the bracket is open
    pressures = np.linspace(P1 + inset, P2 - inset, 5)
    Lb = np.array([prob.solve(p).Lb for p in pressures])
    secs = time.perf_counter() - t0
    span = prob.L2 - prob.L1
    decreasing = bool(np.all(np.diff(Lb) < 0))
    near = max(abs(Lb[0] - prob.L2), abs(Lb[-1] - prob.L1)) / span
    ok = decreasing and near < 0.02 and secs < 30
    return record(2, ok, f"sweep over [{P1:.4f}, {P2:.4f}] strictly decreasing = {decreasing}, "
                         f"endpoint gap {near:.2e} of interval (< 2%), {secs:.1f} s (< 30 s)")


def criterion_3() -> bool:
    t0 = time.perf_counter()
    r = run_2d(config().replace(n1=REF_GRID[0], n2=REF_GRID[1], sigma=0.0), background())
    secs = time.perf_counter() - t0
    bg, f = background(), r.fields
    dev = [np.max(np.abs(f.shock_x - bg.Lb))]
    for block, side in ((f.upstream, bg.minus), (f.downstream, bg.plus)):
        rho, u, P, _ = side(block.x)
        dev += [np.max(np.abs(block.rho - rho)), np.max(np.abs(block.u_x - u)), np.max(np.abs(block.P - P)),
                np.max(np.abs(block.u_r)), np.max(np.abs(block.u_theta))]
    dev = float(max(dev))
    ok = r.report.iterations == 1 and dev < 1e-9 and secs < 60
    return record(3, ok, f"sigma = 0 on {REF_GRID[0]}x{REF_GRID[1]}: {r.report.iterations} iteration, "
                         f"max deviation {dev:.2e} (< 1e-9), {secs:.1f} s (< 60 s)")


def criterion_4() -> bool:
    t0 = time.perf_counter()
    c = np.array([run(s).report.contraction for s in SIGMAS])
    secs = time.perf_counter() - t0
    per_sigma = c / np.array(SIGMAS)
    spread = per_sigma.max() / per_sigma.min() - 1.0
    ok = bool(np.all(c < 0.5)) and spread <= 0.3 and secs < 600
    return record(4, ok, "contraction " + ", ".join(f"{x:.2e}" for x in c)
                  + f" (< 0.5), ratio/sigma spread {100 * spread:.1f}% (<= 30%), {secs:.1f} s (< 600 s)")


def criterion_5() -> bool:
    s = np.array((0.0, *SIGMAS, 5e-3))
    runs = [run_2d(config().replace(n1=REF_GRID[0], n2=REF_GRID[1], sigma=0.0), background())] + \
           [run(x) for x in s[1:]]
    fields = np.array([max(v for k, v in r.deviations().items() if k != "w5") for r in runs])
    shock = np.array([r.fields.shock_displacement for r in runs])
    _, r2f = through_origin_fit(s, fields)
    _, r2s = through_origin_fit(s, shock)
    return record(5, min(r2f, r2s) >= 0.99, f"through-origin fit R^2 fields {r2f:.6f}, shock {r2s:.6f} (>= 0.99)")


def criterion_6() -> bool:
    coarse, fine = run(5e-3, REF_GRID).verification.values, run(5e-3, FINE_GRID).verification.values
    keys = (*EULER_KEYS, "rh_1", "rh_2", "rh_3", "rh_4")
    ratios = {k: coarse[k] / fine[k] for k in keys}
    entropy = min(coarse["entropy_min"], fine["entropy_min"])
    ok = min(ratios.values()) >= 3.0 and entropy > 0
    return record(6, ok, "refinement ratios " + ", ".join(f"{k} {v:.2f}" for k, v in ratios.items())
                  + f" (>= 3), min P+ - P- = {entropy:.4f} (> 0)")


def iterate_axis_residuals(r) -> dict:
    it, g = r.iterate, r.inputs.grid
    z3, z4 = g.z2[:3], g.z2[:4]
    cols = range(g.n1 + 1)
    return {
        "w2": float(np.max(np.abs(it.w2[:, 0]))),
        "d2_w2": max(abs(_lagrange_derivative(z4, it.w2[i, :4], 2)) for i in cols),
        "w3": float(np.max(np.abs(it.w3[:, 0]))),
        "d_w3": max(abs(_lagrange_derivative(z3, it.w3[i, :3], 1)) for i in cols),
        "d_w1": max(abs(_lagrange_derivative(z3, it.w1[i, :3], 1)) for i in cols),
        "d_w4": max(abs(_lagrange_derivative(z3, it.w4[i, :3], 1)) for i in cols),
    }


def criterion_7() -> bool:
    r = run(5e-3)
    h = r.verification.h
    phys = {k: v for k, v in r.verification.values.items() if k.startswith("compat_")}
    g = r.inputs.grid
    hz = max(g.h1, g.h2)
    iter_res = iterate_axis_residuals(r)
    worst_phys = max(v / h**2 for v in phys.values())
    worst_iter = max(v / hz**2 for v in iter_res.values())
    ok = worst_phys <= 5 and worst_iter <= 5
    return record(7, ok, f"{len(phys)} physical axis checks max {worst_phys:.3f} h^2, "
                         f"{len(iter_res)} iterate axis checks max {worst_iter:.3f} h^2 (<= 5 h^2), "
                         f"d2_w2 = {iter_res['d2_w2']:.2e}")


def criterion_8() -> bool:
    from test_elliptic import _first_j1_root, cubic_family, manufactured, quadratic_family
    bg = background()
    geom = MassGeometry(np.sqrt(bg.mass_flux / 2), np.sqrt(2.0 / bg.mass_flux), bg.Lb, bg.L2)
    cf = compute_coefficients(bg, geom)
    errs, diffs = [], []
    for n1, n2 in ((32, 16), (64, 32), (128, 64)):
        g = Grid(bg.Lb, bg.L2, geom.M, n1, n2)
        pr, exact = manufactured(g, cf, **cubic_family(g))
        errs.append(np.max(np.abs(FDEllipticSolver(g, cf).solve(pr).phi - exact)))
        pq, _ = manufactured(g, cf, **quadratic_family(g))
        diffs.append(np.max(np.abs(FDEllipticSolver(g, cf).solve(pq).phi - ModeEllipticSolver(g, cf, 32).solve(pq).phi)))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    j = _first_j1_root()
    eig_err = max(abs(neumann_disk_eigenvalues(M, 2)[1] - (j / M) ** 2) for M in (geom.M, 1.0))
    ok = bool(np.all(np.abs(orders - 2) < 0.2)) and diffs[-1] < 1e-6 and eig_err < 1e-10
    return record(8, ok, "manufactured orders " + ", ".join(f"{o:.2f}" for o in orders)
                  + f" (2 +- 0.2), fd vs modes {diffs[-1]:.2e} (< 1e-6), eigenvalue error {eig_err:.1e} (< 1e-10)")


def criterion_9() -> bool:
    cases = ((0.5, 0.0, 5.89), (0.3, 0.0, 5.0), (0.4, 0.2, 6.2))
    results = []
    for g0, slope, Pe in cases:
        force = ForceProfile.linear(g0, slope) if slope else ForceProfile.constant(g0)
        bg = BackgroundProblem(GasLaw(1.4), force, State1D(1.0, 2.0), 0.0, 2.0).solve(Pe)
        geom = MassGeometry(np.sqrt(bg.mass_flux / 2), np.sqrt(2.0 / bg.mass_flux), bg.Lb, bg.L2)
        rep = compute_coefficients(bg, geom).sign_report()
        results.append([k for k, v in rep.items() if not v])
    ok = not any(results)
    return record(9, ok, f"sign constraints hold for {sum(not r for r in results)}/3 backgrounds"
                  + ("" if ok else f", violated: {results}"))


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9]


@pytest.mark.slow
@pytest.mark.parametrize("crit", CRITERIA, ids=[f"criterion_{k + 1}" for k in range(9)])
def test_acceptance(crit):
    assert crit()


if __name__ == "__main__":
    passed = [c() for c in CRITERIA]
    print(f"{sum(passed)}/{len(passed)} criteria passed")
    sys.exit(0 if all(passed) else 1)
