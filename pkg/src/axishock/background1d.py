"""One-dimensional transonic shock with an external force.

Along a 1-D branch the mass flux m = rho*u is constant, which reduces the
steady equations to the scalar ODE

    (u - c^2(m/u)/u) u' = g(x).

A supersonic branch is integrated from the inlet, jumped to the subsonic
state with the same mass flux and momentum flux, and the subsonic branch is
integrated to the exit.  The exit pressure is strictly decreasing in the
shock position, so the shock position for a given exit pressure is found by
bisection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline
from scipy.optimize import bisect, brentq

from .errors import AdmissibilityError, GasDomainError, JumpFailure, SonicDegeneracy
from .gas import GasLaw

SONIC_GUARD = 1e-6
DEFAULT_STEPS = 2048


@dataclass(frozen=True)
class State1D:
    rho: float
    u: float

    @property
    def mass_flux(self) -> float:
        return self.rho * self.u


@dataclass(frozen=True)
class ForceProfile:
    """Axial acceleration g(x) > 0 and its antiderivative Phi_b, Phi_b(L1) = 0."""

    g: Callable
    Phi_b: Callable
    name: str = "custom"
    params: dict = field(default_factory=dict)

    @classmethod
    def constant(cls, g0: float, L1: float = 0.0) -> "ForceProfile":
        return cls(
            g=lambda x: np.full_like(np.asarray(x, dtype=float), g0),
            Phi_b=lambda x: g0 * (np.asarray(x, dtype=float) - L1),
            name="constant",
            params={"g0": g0, "L1": L1},
        )

    @classmethod
    def linear(cls, g0: float, slope: float, L1: float = 0.0) -> "ForceProfile":
        """g(x) = g0 + slope*(x - L1)."""

        def g(x):
            return g0 + slope * (np.asarray(x, dtype=float) - L1)

        def Phi_b(x):
            s = np.asarray(x, dtype=float) - L1
            return g0 * s + 0.5 * slope * s**2

        return cls(g=g, Phi_b=Phi_b, name="linear", params={"g0": g0, "slope": slope, "L1": L1})

    @classmethod
    def tabulated(cls, x, g, L1: float | None = None) -> "ForceProfile":
        x = np.asarray(x, dtype=float)
        if np.any(np.diff(x) <= 0):
            raise ValueError("tabulated force needs strictly increasing x")
        spline = CubicSpline(x, np.asarray(g, dtype=float))
        anti = spline.antiderivative()
        x0 = x[0] if L1 is None else L1
        return cls(
            g=lambda s: spline(s),
            Phi_b=lambda s: anti(s) - anti(x0),
            name="tabulated",
            params={"x": x.tolist(), "g": np.asarray(g, dtype=float).tolist()},
        )

    def check_positive(self, L1: float, L2: float, n: int = 257) -> None:
        xs = np.linspace(L1, L2, n)
        if np.any(self.g(xs) <= 0):
            raise ValueError("the force profile must satisfy g > 0 on [L1, L2]")


def velocity_slope(gas: GasLaw, m: float, u, g):
    """u' from the scalar branch ODE, g u / (u^2 - c^2(m/u))."""
    c2 = gas.sound_speed_sq(m / u)
    return g * u / (u * u - c2)


def _rk4(gas: GasLaw, m: float, u0: float, x0: float, x1: float, n: int,
         force: ForceProfile, stop_margin: float | None = None):
    """Classical RK4 for the branch ODE with fixed step.

    Returns the node positions and velocities.  With ``stop_margin`` the
    integration stops quietly before |1 - M^2| drops below the margin instead
    of raising, which is how branch extensions are truncated.
    """
    if n < 1:
        raise ValueError("need at least one step")
    h = (x1 - x0) / n
    gv = np.asarray(force.g(x0 + 0.5 * h * np.arange(2 * n + 1)), dtype=float).tolist()
    gam = gas.gamma
    gm1 = gam - 1.0
    if not (u0 > 0 and m > 0):
        raise GasDomainError("branch needs positive velocity and mass flux")
    side = 1.0 if u0 * u0 > gam * (m / u0) ** gm1 else -1.0
    guard = SONIC_GUARD if stop_margin is None else stop_margin
    # with a = u^2/c^2 - 1 the ODE reads u' = g(1+a)/(u*a); the sign of a must
    # stay that of the starting branch and |a| above the guard
    lo = guard if side > 0 else -math.inf
    hi = math.inf if side > 0 else -guard
    cm = gam * m**gm1
    half = 0.5 * h
    sixth = h / 6.0

    us = [u0]
    u = u0
    failed = False
    for k in range(n):
        g0 = gv[2 * k]
        gh = gv[2 * k + 1]
        g1 = gv[2 * k + 2]
        a = u ** (gm1 + 2.0) / cm - 1.0
        k1 = g0 * (1.0 + a) / (u * a)
        v = u + half * k1
        a2 = v ** (gm1 + 2.0) / cm - 1.0 if v > 0 else math.nan
        k2 = gh * (1.0 + a2) / (v * a2)
        v = u + half * k2
        a3 = v ** (gm1 + 2.0) / cm - 1.0 if v > 0 else math.nan
        k3 = gh * (1.0 + a3) / (v * a3)
        v = u + h * k3
        a4 = v ** (gm1 + 2.0) / cm - 1.0 if v > 0 else math.nan
        k4 = g1 * (1.0 + a4) / (v * a4)
        u_new = u + sixth * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        a5 = u_new ** (gm1 + 2.0) / cm - 1.0 if u_new > 0 else math.nan
        if not (lo < a2 < hi and lo < a3 < hi and lo < a4 < hi and lo < a5 < hi):
            failed = True
            break
        u = u_new
        us.append(u)
    if failed and stop_margin is None:
        raise SonicDegeneracy(f"branch reached the sonic guard near x = {x0 + h * len(us):.6g}")
    xs = x0 + h * np.arange(len(us))
    return xs, np.array(us)


@dataclass(frozen=True)
class Branch:
    """A sampled 1-D branch with a 4th-order Hermite interpolant."""

    gas: GasLaw
    force: ForceProfile
    mass_flux: float
    x: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        du = velocity_slope(self.gas, self.mass_flux, self.u, self.force.g(self.x))
        object.__setattr__(self, "_spline", CubicHermiteSpline(self.x, self.u, du))

    @property
    def rho(self):
        return self.mass_flux / self.u

    @property
    def P(self):
        return self.gas.pressure(self.rho)

    @property
    def mach(self):
        return np.sqrt(self.gas.mach_sq(self.rho, self.u**2))

    def velocity(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < self.x[0] - 1e-12) or np.any(x > self.x[-1] + 1e-12):
            raise ValueError(f"x outside the branch range [{self.x[0]}, {self.x[-1]}]")
        return self._spline(x)

    def velocity_slope(self, x):
        return velocity_slope(self.gas, self.mass_flux, self.velocity(x), self.force.g(x))

    def state(self, x):
        """(rho, u, P, c^2) at x."""
        u = self.velocity(x)
        rho = self.mass_flux / u
        return rho, u, self.gas.pressure(rho), self.gas.sound_speed_sq(rho)

    def bernoulli(self, x):
        rho, u, _, _ = self.state(x)
        return 0.5 * u**2 + self.gas.enthalpy(rho) - self.force.Phi_b(x)

    def table(self) -> dict:
        return {"x": self.x, "rho": self.rho, "u": self.u, "P": self.P, "Mach": self.mach}


def integrate_branch(gas: GasLaw, start: State1D, x0: float, x1: float,
                     force: ForceProfile, n_steps: int = DEFAULT_STEPS) -> Branch:
    """Integrate a strictly supersonic or strictly subsonic branch from x0 to x1."""
    m = start.mass_flux
    xs, us = _rk4(gas, m, start.u, x0, x1, n_steps, force)
    if x1 < x0:
        xs, us = xs[::-1], us[::-1]
    return Branch(gas, force, m, xs, us)


def shock_jump_1d(gas: GasLaw, upstream: State1D) -> State1D:
    """Subsonic state with the same mass and momentum flux as ``upstream``.

    Solves m^2/rho + rho^gamma = m^2/rho_minus + rho_minus^gamma for the
    root rho_plus > rho_minus.
    """
    rho_m, u_m = upstream.rho, upstream.u
    m = rho_m * u_m
    gam = gas.gamma
    c2 = gas.sound_speed_sq(rho_m)
    if abs(u_m * u_m - c2) <= 1e-14 * c2:
        return upstream
    if u_m * u_m < c2:
        raise JumpFailure("upstream state is subsonic")
    momentum = m * m / rho_m + rho_m**gam
    # the momentum flux has its minimum at the sonic density
    rho_sonic = (m * m / gam) ** (1.0 / (gam + 1.0))

    def G(r):
        return m * m / r + r**gam - momentum

    hi = 2.0 * rho_sonic
    for _ in range(200):
        if G(hi) > 0:
            break
        hi *= 2.0
    else:
        raise JumpFailure("could not bracket the subsonic root")
    if not G(rho_sonic) < 0:
        raise JumpFailure("degenerate jump: no subsonic root")
    rho_p = brentq(G, rho_sonic, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    return State1D(rho_p, m / rho_p)


@dataclass(frozen=True)
class BackgroundProblem:
    """Inputs of the 1-D shock problem."""

    gas: GasLaw
    force: ForceProfile
    inlet: State1D
    L1: float = 0.0
    L2: float = 2.0
    n_steps: int = DEFAULT_STEPS
    bracket_offset: float = 1e-4  # delta x used for the admissible bracket, relative to L2-L1

    def __post_init__(self):
        if not self.L2 > self.L1:
            raise ValueError("need L1 < L2")
        self.force.check_positive(self.L1, self.L2)
        c2 = self.gas.sound_speed_sq(self.inlet.rho)
        if not self.inlet.u**2 > c2:
            raise ValueError("inlet state must be supersonic")

    @property
    def mass_flux(self) -> float:
        return self.inlet.mass_flux

    def _branches_at(self, s: float):
        m = self.mass_flux
        x_sup, u_sup = _rk4(self.gas, m, self.inlet.u, self.L1, s, self.n_steps, self.force)
        minus = State1D(m / u_sup[-1], u_sup[-1])
        plus = shock_jump_1d(self.gas, minus)
        x_sub, u_sub = _rk4(self.gas, m, plus.u, s, self.L2, self.n_steps, self.force)
        return (x_sup, u_sup), (x_sub, u_sub)

    def exit_pressure_of_shock_position(self, s: float) -> float:
        if not self.L1 < s < self.L2:
            raise ValueError("shock position must lie strictly inside (L1, L2)")
        _, (_, u_sub) = self._branches_at(s)
        return float(self.gas.pressure(self.mass_flux / u_sub[-1]))

    def admissible_bracket(self) -> tuple[float, float]:
        """Numerical (P1, P2): exit pressures for shocks next to L2 and L1."""
        dx = self.bracket_offset * (self.L2 - self.L1)
        P1 = self.exit_pressure_of_shock_position(self.L2 - dx)
        P2 = self.exit_pressure_of_shock_position(self.L1 + dx)
        return P1, P2

    def solve(self, exit_pressure: float, xtol: float = 1e-12) -> "BackgroundSolution":
        return solve_background(self, exit_pressure, xtol=xtol)


@dataclass(frozen=True)
class BackgroundSolution:
    problem: BackgroundProblem
    Lb: float
    exit_pressure: float
    supersonic: Branch
    subsonic: Branch
    bracket: tuple[float, float]

    @property
    def gas(self) -> GasLaw:
        return self.problem.gas

    @property
    def force(self) -> ForceProfile:
        return self.problem.force

    @property
    def L1(self) -> float:
        return self.problem.L1

    @property
    def L2(self) -> float:
        return self.problem.L2

    @property
    def mass_flux(self) -> float:
        return self.problem.mass_flux

    def plus(self, x):
        """Subsonic branch state (rho, u, P, c^2) at x."""
        return self.subsonic.state(x)

    def minus(self, x):
        return self.supersonic.state(x)

    def pressure_jump(self) -> float:
        return float(self.plus(self.Lb)[2] - self.minus(self.Lb)[2])


def solve_background(problem: BackgroundProblem, exit_pressure: float,
                     xtol: float = 1e-12) -> BackgroundSolution:
    """Shock position matching ``exit_pressure``, with extended branches."""
    P1, P2 = problem.admissible_bracket()
    if not P1 < exit_pressure < P2:
        raise AdmissibilityError(
            f"exit pressure {exit_pressure:.12g} outside the admissible bracket "
            f"({P1:.12g}, {P2:.12g})", (P1, P2))
    dx = problem.bracket_offset * (problem.L2 - problem.L1)
    lo, hi = problem.L1 + dx, problem.L2 - dx
    Lb = bisect(lambda s: problem.exit_pressure_of_shock_position(s) - exit_pressure,
                lo, hi, xtol=xtol * (problem.L2 - problem.L1), rtol=4 * np.finfo(float).eps, maxiter=200)
    return _build_solution(problem, Lb, exit_pressure, (P1, P2))


def _build_solution(problem, Lb, exit_pressure, bracket) -> BackgroundSolution:
    gas, force, m = problem.gas, problem.force, problem.mass_flux
    (x_sup, u_sup), (x_sub, u_sub) = problem._branches_at(Lb)
    span = problem.L2 - problem.L1
    # continue the supersonic branch to L2
    n_ext = max(1, math.ceil(problem.n_steps * (problem.L2 - Lb) / span))
    xe, ue = _rk4(gas, m, u_sup[-1], Lb, problem.L2, n_ext, force)
    sup = Branch(gas, force, m, np.concatenate([x_sup, xe[1:]]), np.concatenate([u_sup, ue[1:]]))
    # continue the subsonic branch back towards L1, stopping short of sonic
    n_ext = max(1, math.ceil(problem.n_steps * (Lb - problem.L1) / span))
    xb, ub = _rk4(gas, m, u_sub[0], Lb, problem.L1, n_ext, force, stop_margin=0.05)
    sub = Branch(gas, force, m, np.concatenate([xb[:0:-1], x_sub]), np.concatenate([ub[:0:-1], u_sub]))
    return BackgroundSolution(problem, float(Lb), float(exit_pressure), sup, sub, bracket)
