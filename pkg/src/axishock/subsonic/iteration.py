"""The iteration map T and its fixed-point driver.

One application of T takes an iterate, evaluates the nonlinear remainders on
it, solves the elliptic problem for the potential and recovers the new
iterate: velocity from the potential, the shock from the jump relation, the
swirl by conservation of angular momentum and the Bernoulli quantity by
transport along streamlines.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ..errors import AxishockError, DivergenceError, GeometryError, StageError
from ..transform import d_z1, d_z2
from .elliptic import EllipticProblem, FDEllipticSolver, ModeEllipticSolver
from .grid import Iterate, composite_norm
from .remainders import RemainderBundle, SolverInputs, nonlinear_remainders


def recover_velocity(phi: np.ndarray, bundle: RemainderBundle, inputs: SolverInputs):
    """(w1, w2, W) from the potential; W is the value of w1 on the shock column."""
    grid, cf, s = inputs.grid, inputs.coeffs, inputs.samples
    dphi1 = d_z1(phi, grid.h1)
    dphi1[0] = cf.b5 * phi[0] + bundle.q2
    dphi1[-1] = bundle.q3
    w2 = d_z2(phi, grid.h2, parity=1)
    w2[:, -1] = bundle.h4
    W = cf.b4 * (cf.b5 * phi[0] + bundle.q2 + bundle.I[0])
    w1 = (dphi1 + s["d5"][:, None] * cf.beta * W[None, :] + bundle.I) / s["d2"][:, None]
    return w1, w2, W


def update_shock(W: np.ndarray, bundle: RemainderBundle, inputs: SolverInputs):
    """Shock displacement from the linearised mass/momentum jump and the constant Lambda."""
    cf = inputs.coeffs
    w5 = (W - bundle.R2) / cf.b2
    return w5, float(w5[-1] / cf.a1)


def transport_swirl(bundle: RemainderBundle, inputs: SolverInputs) -> np.ndarray:
    """r u_theta is constant on streamlines; u_theta is continuous across the shock."""
    rz = bundle.state["r_over_z2"]
    return bundle.trace["u_theta"][None, :] * rz[:1] / rz


def transport_bernoulli(W: np.ndarray, bundle: RemainderBundle, inputs: SolverInputs) -> np.ndarray:
    w4s = inputs.coeffs.beta * W + bundle.R4
    return np.repeat(w4s[None, :], inputs.grid.n1 + 1, axis=0)


def make_solver(inputs: SolverInputs, backend: str = "fd", n_modes: int = 32):
    if backend == "fd":
        return FDEllipticSolver(inputs.grid, inputs.coeffs)
    if backend == "modes":
        return ModeEllipticSolver(inputs.grid, inputs.coeffs, n_modes)
    raise ValueError(f"unknown backend {backend!r}")


def apply_T(hat: Iterate, inputs: SolverInputs, solver=None) -> Iterate:
    solver = solver or make_solver(inputs)
    try:
        bundle = nonlinear_remainders(hat, inputs)
    except StageError:
        raise
    except AxishockError as exc:
        raise StageError("remainders", exc) from exc
    problem = EllipticProblem.from_remainders(bundle, inputs)
    try:
        sol = solver.solve(problem)
    except AxishockError as exc:
        raise StageError("elliptic", exc) from exc
    w1, w2, W = recover_velocity(sol.phi, bundle, inputs)
    w5, Lam = update_shock(W, bundle, inputs)
    w3 = transport_swirl(bundle, inputs)
    w4 = transport_bernoulli(W, bundle, inputs)
    xs = inputs.grid.Lb + w5
    bg = inputs.background
    if np.any(xs <= bg.L1) or np.any(xs >= bg.L2):
        raise StageError("shock", GeometryError("shock left the nozzle section"))
    return Iterate(w1, w2, w3, w4, w5, Lam, info={"bundle": bundle, "elliptic": sol, "W": W})


@dataclass
class FixedPointReport:
    converged: bool
    iterations: int
    history: list            # composite norms of successive differences
    ratios: list             # history[k+1]/history[k]
    contraction: float       # estimate of the contraction factor
    elliptic_residual: float
    remainder_norms: dict
    seconds: float
    backend: str
    info: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"converged": self.converged, "iterations": self.iterations, "history": self.history,
                "ratios": self.ratios, "contraction": self.contraction,
                "elliptic_residual": self.elliptic_residual, "remainder_norms": self.remainder_norms,
                "seconds": self.seconds, "backend": self.backend}


def contraction_estimate(history, floor: float) -> float:
    """Median ratio of successive differences that sit well above the roundoff floor."""
    h = np.asarray(history, dtype=float)
    keep = [h[k + 1] / h[k] for k in range(h.size - 1) if h[k + 1] > floor and h[k] > 0]
    return float(np.median(keep)) if keep else 0.0


def fixed_point(inputs: SolverInputs, backend: str = "fd", tol: float = 1e-11, max_iter: int = 60,
                relaxation: float = 1.0, n_modes: int = 32, initial: Iterate | None = None,
                blowup: float = 1e3, callback=None) -> tuple[Iterate, FixedPointReport]:
    """Iterate w <- (1 - theta) w + theta T(w) from zero until the update is below tol.

    ``tol`` is relative to max(1, |w|).  Raises DivergenceError when the update
    grows by ``blowup`` over its first value, turns non-finite, or max_iter is
    reached.
    """
    t0 = time.perf_counter()
    solver = make_solver(inputs, backend, n_modes)
    grid = inputs.grid
    it = initial if initial is not None else Iterate.zeros(grid)
    history: list[float] = []
    new = it
    for k in range(max_iter):
        try:
            nxt = apply_T(it, inputs, solver)
        except StageError as exc:
            raise DivergenceError(f"iteration {k}: {exc}", history) from exc
        new = it.blend(nxt, relaxation) if relaxation != 1.0 else nxt
        new.info = nxt.info
        step = composite_norm(new - it, grid)
        history.append(step)
        if callback is not None:
            callback(k, new, step)
        if not np.isfinite(step) or (len(history) > 1 and step > blowup * max(history[0], 1e-300)):
            raise DivergenceError(f"iteration diverged at step {k} (update {step:.3e})", history)
        it = new
        if step <= tol * max(1.0, composite_norm(it, grid)):
            break
    else:
        raise DivergenceError(f"no convergence in {max_iter} iterations (last update {history[-1]:.3e})",
                              history)
    bundle = it.info["bundle"]
    ratios = [history[k + 1] / history[k] for k in range(len(history) - 1) if history[k] > 0]
    scale = max(1.0, composite_norm(it, grid))
    report = FixedPointReport(
        converged=True, iterations=len(history), history=history, ratios=ratios,
        contraction=contraction_estimate(history, 1e3 * tol * scale),
        elliptic_residual=it.info["elliptic"].residual, remainder_norms=bundle.norms(),
        seconds=time.perf_counter() - t0, backend=backend)
    return it, report
