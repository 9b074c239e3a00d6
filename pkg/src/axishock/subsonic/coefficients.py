"""Coefficients of the linearised problem about the background subsonic flow.

Profiles are functions of z1 on [Lb, L2]; scalars are evaluated at Lb.  The
values b1, b2, b3 come from linearising the mass and momentum jumps and the
Bernoulli quantity at the shock, a1 from the shock-slope relation, and the
lambda profiles from reducing the first-order system to one second-order
equation for the potential.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from ..background1d import BackgroundSolution
from ..errors import AxishockError
from ..transform import MassGeometry


class CoefficientError(AxishockError):
    pass


def profile_formulas(gamma, kappa, u, c2, g):
    """d1..d5 and the auxiliary profiles at background states (u, c^2, g)."""
    Mb2 = u**2 / c2
    du = g * u / (u**2 - c2)
    d1 = 1.0 - Mb2
    d2 = np.full_like(np.asarray(u, dtype=float), 1.0 / kappa)
    d3 = (1.0 + gamma * Mb2) * g / (c2 - u**2)
    d4 = (gamma - 1.0) * du / c2
    d5 = 1.0 / (kappa * u)
    # the combination multiplying lambda0 * (b3/b2) * w1(Lb, .) after the
    # reduction: d3 d5/(d1 d2) + (d5/d2)' + d4/d1, with (d5/d2)' = -u'/u^2
    bracket = d3 * d5 / (d1 * d2) - du / u**2 + d4 / d1
    return {"Mb2": Mb2, "du": du, "d1": d1, "d2": d2, "d3": d3, "d4": d4, "d5": d5, "bracket": bracket}


def jump_formulas(gamma, kappa, rho_p, u_p, c2_p, rho_m, P_p, P_m, g):
    """Scalars a1, b1, b2, b3 and b4 at the shock position."""
    drho = rho_p - rho_m
    a1 = 2.0 / (kappa * (P_p - P_m))
    b1 = -drho * g / (c2_p - u_p**2)
    b2 = u_p * drho * g / (rho_p * (c2_p - u_p**2))
    b3 = -drho * g / rho_p
    d2 = 1.0 / kappa
    d5 = 1.0 / (kappa * u_p)
    with np.errstate(divide="ignore", invalid="ignore"):
        beta = b3 / b2 if b2 != 0 else -(c2_p - u_p**2) / u_p
    b4 = 1.0 / (d2 - d5 * beta)
    return {"a1": a1, "b1": b1, "b2": b2, "b3": b3, "beta": beta, "b4": b4}


@dataclass(frozen=True)
class CoefficientTable:
    gamma: float
    kappa_b: float
    Lb: float
    L2: float
    a1: float
    b1: float
    b2: float
    b3: float
    b4: float
    b5: float
    beta: float            # b3/b2
    Mb2: Callable
    d1: Callable
    d2: Callable
    d3: Callable
    d4: Callable
    d5: Callable
    du: Callable           # background u'
    lambda0: Callable
    lambda1: Callable
    lambda2: Callable
    lambda3: Callable
    dlambda1: Callable     # lambda1' = lambda1 d3/d1 since d2 is constant

    def sample(self, z1) -> dict:
        z1 = np.asarray(z1, dtype=float)
        names = ("Mb2", "d1", "d2", "d3", "d4", "d5", "du", "lambda0", "lambda1", "lambda2", "lambda3",
                 "dlambda1")
        return {n: np.broadcast_to(getattr(self, n)(z1), z1.shape).astype(float) for n in names}

    def scalars(self) -> dict:
        return {n: getattr(self, n) for n in ("a1", "b1", "b2", "b3", "b4", "b5", "beta", "kappa_b")}

    def sign_report(self, n: int = 513) -> dict:
        """True for each sign constraint that holds on a sample of [Lb, L2]."""
        s = self.sample(np.linspace(self.Lb, self.L2, n))
        return {
            "d1>0": bool(np.all(s["d1"] > 0)), "d2>0": bool(np.all(s["d2"] > 0)),
            "d3>0": bool(np.all(s["d3"] > 0)), "d5>0": bool(np.all(s["d5"] > 0)),
            "lambda1>0": bool(np.all(s["lambda1"] > 0)), "lambda2>0": bool(np.all(s["lambda2"] > 0)),
            "lambda3>0": bool(np.all(s["lambda3"] > 0)),
            "b1<0": self.b1 < 0, "b2>0": self.b2 > 0, "b3<0": self.b3 < 0,
            "b4>0": self.b4 > 0, "b5>0": self.b5 > 0,
        }


def compute_coefficients(background: BackgroundSolution, geom: MassGeometry,
                         n_quad: int = 4096) -> CoefficientTable:
    gas = background.gas
    gamma = gas.gamma
    kappa = geom.kappa_b
    Lb, L2 = background.Lb, background.L2
    force = background.force

    def prof(z1):
        z1 = np.asarray(z1, dtype=float)
        _, u, _, c2 = background.plus(z1)
        return profile_formulas(gamma, kappa, u, c2, force.g(z1))

    zq = np.linspace(Lb, L2, n_quad + 1)
    pq = prof(zq)
    if np.any(pq["d1"] <= 0):
        raise CoefficientError("background subsonic branch is not strictly subsonic")
    log_lambda0 = CubicSpline(zq, pq["d3"] / pq["d1"]).antiderivative()

    rho_p, u_p, P_p, c2_p = background.plus(Lb)
    rho_m, _, P_m, _ = background.minus(Lb)
    jp = jump_formulas(gamma, kappa, float(rho_p), float(u_p), float(c2_p), float(rho_m),
                       float(P_p), float(P_m), float(force.g(Lb)))
    b5 = jp["a1"] * jp["b2"] / jp["b4"]

    lam0 = lambda z: np.exp(log_lambda0(z))
    lam1 = lambda z: lam0(z) / prof(z)["d2"]

    def lam2(z):
        p = prof(z)
        return lam0(z) * p["d2"] / p["d1"]

    def lam3(z):
        return -jp["beta"] * jp["b4"] * lam0(z) * prof(z)["bracket"]

    def dlam1(z):
        p = prof(z)
        return lam0(z) / p["d2"] * p["d3"] / p["d1"]

    return CoefficientTable(
        gamma=gamma, kappa_b=kappa, Lb=Lb, L2=L2, a1=jp["a1"], b1=jp["b1"], b2=jp["b2"], b3=jp["b3"],
        b4=jp["b4"], b5=b5, beta=jp["beta"],
        Mb2=lambda z: prof(z)["Mb2"], d1=lambda z: prof(z)["d1"], d2=lambda z: prof(z)["d2"],
        d3=lambda z: prof(z)["d3"], d4=lambda z: prof(z)["d4"], d5=lambda z: prof(z)["d5"],
        du=lambda z: prof(z)["du"], lambda0=lam0, lambda1=lam1, lambda2=lam2, lambda3=lam3, dlambda1=dlam1,
    )


def lambda3_closed_form(table: CoefficientTable, background: BackgroundSolution, z1):
    """lambda3 = -(b3 b4/b2) lambda0 * 2 c^2 g / (u (c^2 - u^2)^2)."""
    _, u, _, c2 = background.plus(z1)
    g = background.force.g(z1)
    return -table.beta * table.b4 * table.lambda0(z1) * 2.0 * c2 * g / (u * (c2 - u**2) ** 2)
