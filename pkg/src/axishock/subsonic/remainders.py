"""Nonlinear remainders of the subsonic problem at a given iterate.

Every remainder is computed as a defect: the linear operator applied to the
iterate minus the exact nonlinear residual at the same iterate.  At a fixed
point of the iteration the linear equations with these right-hand sides are
then equivalent to the full nonlinear problem, and for the unperturbed
background every defect vanishes to roundoff.

Interior equations are the divergence (deformation) equation N1 and the curl
equation N2 written in the mass coordinates (y1, y2) = (x, y2) with the
axisymmetric Jacobian k = r rho / (2 y2).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid

from ..background1d import BackgroundSolution, velocity_slope
from ..errors import StageError
from ..profiles import ZeroForce
from ..transform import (FixedDomainMap, MassGeometry, UpstreamMassView, d_z1, d_z2, radius_from_mass,
                         radius_over_z2, shock_slope)
from ..upstream import PerturbationData, UpstreamField
from .coefficients import CoefficientTable, compute_coefficients
from .grid import Grid, Iterate

# parities of w1..w4 about the axis
PARITY = {"w1": 1, "w2": -1, "w3": -1, "w4": 1}


@dataclass
class SolverInputs:
    background: BackgroundSolution
    data: PerturbationData
    upstream: UpstreamField
    view: UpstreamMassView
    geom: MassGeometry
    grid: Grid
    coeffs: CoefficientTable
    samples: dict = field(default_factory=dict, repr=False)  # coefficient profiles on the z1 nodes

    @property
    def sigma(self) -> float:
        return self.data.sigma


def prepare_inputs(background: BackgroundSolution, data: PerturbationData, upstream: UpstreamField,
                   n1: int, n2: int) -> SolverInputs:
    geom = MassGeometry.from_fields(upstream, background)
    view = UpstreamMassView(upstream, geom.M)
    grid = Grid(background.Lb, background.L2, geom.M, n1, n2)
    coeffs = compute_coefficients(background, geom)
    return SolverInputs(background, data, upstream, view, geom, grid, coeffs, coeffs.sample(grid.z1))


def downstream_state(it: Iterate, inputs: SolverInputs, max_inner: int = 60) -> dict:
    """Physical state behind the shock represented by an iterate.

    The density follows from the Bernoulli quantity, which needs the force
    potential at the physical radius; radius and density are found together by
    a short fixed-point loop.
    """
    bg, grid, data = inputs.background, inputs.grid, inputs.data
    gas = bg.gas
    z1, z2 = grid.z1, grid.z2
    dw5 = shock_slope(it.w5, grid.h2)
    mp = FixedDomainMap(grid.Lb, grid.L2, z1, it.w5, dw5)
    D0 = mp.D0
    rho_b, u_b, P_b, c2_b = bg.plus(D0)
    g = bg.force.g(D0)
    du_b = velocity_slope(gas, bg.mass_flux, u_b, g)
    Phi_b = bg.force.Phi_b(D0)
    B_b = 0.5 * u_b**2 + gas.enthalpy(rho_b) - Phi_b

    ux = u_b + it.w1
    ur, uth = it.w2, it.w3
    q2 = ux**2 + ur**2 + uth**2
    B = B_b + it.w4
    sigma = data.sigma
    passive = sigma == 0.0 or isinstance(data.force, ZeroForce)
    # z1 = const lines move in x by dD0/dz2 = (L2 - z1)/(L2 - Lb) w5'
    drift = (ur / ux) * ((grid.L2 - z1) / (grid.L2 - grid.Lb))[:, None] * dw5[None, :]
    r = radius_from_mass(z2, rho_b * u_b)
    for _ in range(1 if passive else max_inner):
        Phi = Phi_b + (0.0 if passive else sigma * data.force.value(D0, r))
        rho = gas.density_from_bernoulli(B, Phi, q2)
        flux = rho * ux
        r_new = radius_from_mass(z2, flux, drift)
        done = np.max(np.abs(r_new - r)) < 1e-15
        r = r_new
        if done:
            break
    if passive:
        fx = np.zeros_like(D0)
        fr = np.zeros_like(D0)
    else:
        fx, fr = data.force.grad(D0, r)
        fx, fr = sigma * fx, sigma * fr
    return {
        "map": mp, "D0": D0, "dw5": dw5, "rho_b": rho_b, "u_b": u_b, "P_b": P_b, "c2_b": c2_b,
        "du_b": du_b, "g": g, "B_b": B_b, "u_x": ux, "u_r": ur, "u_theta": uth, "B": B, "rho": rho,
        "P": gas.pressure(rho), "c2": gas.sound_speed_sq(rho), "r": r, "flux": flux,
        "r_over_z2": radius_over_z2(z2, flux, r), "dPhi_dx": g + fx, "dPhi_dr": fr,
    }


@dataclass
class RemainderBundle:
    F3: np.ndarray
    F4: np.ndarray
    G1: np.ndarray
    G2: np.ndarray
    I: np.ndarray
    R1: np.ndarray
    R2: np.ndarray
    R3: np.ndarray
    R4: np.ndarray
    h1: np.ndarray
    h2: np.ndarray
    h3: np.ndarray
    h4: np.ndarray
    q2: np.ndarray   # q~2, Robin data at the shock
    q3: np.ndarray   # q~3, Neumann data at the exit
    Gc1: np.ndarray  # calligraphic G1 = -lambda1 I
    Gc2: np.ndarray  # calligraphic G2
    Gc3: np.ndarray  # calligraphic G3
    trace: dict      # upstream trace at the current shock position
    state: dict      # downstream state of the iterate

    def norms(self) -> dict:
        names = ("F3", "F4", "G1", "G2", "R1", "R2", "R3", "R4", "h1", "h2", "h3", "h4")
        return {n: float(np.max(np.abs(getattr(self, n)))) for n in names}


def _interior_defects(it: Iterate, st: dict, inputs: SolverInputs):
    grid, s = inputs.grid, inputs.samples
    h1, h2 = grid.h1, grid.h2
    z2 = grid.z2
    mp = st["map"]
    w = {"w1": it.w1, "w2": it.w2, "w3": it.w3, "w4": it.w4}
    dz1 = {k: d_z1(v, h1) for k, v in w.items()}
    dz2 = {k: d_z2(v, h2, PARITY[k]) for k, v in w.items()}

    D1, D2c = mp.D1, mp.D2_coeff
    ux, ur, uth = st["u_x"], st["u_r"], st["u_theta"]
    c2 = st["c2"]
    ux_y1 = st["du_b"] + D1 * dz1["w1"]
    ux_y2 = dz2["w1"] + D2c * dz1["w1"]
    ur_y1 = D1 * dz1["w2"]
    ur_y2 = dz2["w2"] + D2c * dz1["w2"]
    uth_y2 = dz2["w3"] + D2c * dz1["w3"]
    B_y2 = dz2["w4"] + D2c * dz1["w4"]
    k = 0.5 * st["rho"] * st["r_over_z2"]

    r = st["r"]
    ur_over_r = np.empty_like(ur)
    uth2_over_r = np.empty_like(ur)
    ur_over_r[:, 1:] = ur[:, 1:] / r[:, 1:]
    ur_over_r[:, 0] = (k * ux * ur_y2)[:, 0]
    uth2_over_r[:, 1:] = uth[:, 1:] ** 2 / r[:, 1:]
    uth2_over_r[:, 0] = 0.0

    E1 = ((c2 - ux**2) * (ux_y1 - k * ur * ux_y2) + (c2 - ur**2) * k * ux * ur_y2
          + (c2 + uth**2) * ur_over_r + ux * st["dPhi_dx"] + ur * st["dPhi_dr"]
          - ux * ur * (ur_y1 - k * ur * ur_y2 + k * ux * ux_y2))
    E2 = (ux * (ur_y1 - k * ur * ur_y2 - k * ux * ux_y2) - k * ux * uth * uth_y2
          - uth2_over_r + k * ux * B_y2)
    N1 = E1 / st["c2_b"]
    N2 = E2 / st["u_b"]

    col = lambda name: s[name][:, None]
    w2_over_z2 = np.empty_like(it.w2)
    w2_over_z2[:, 1:] = it.w2[:, 1:] / z2[1:]
    w2_over_z2[:, 0] = dz2["w2"][:, 0]
    L1 = (col("d1") * dz1["w1"] + col("d2") * (dz2["w2"] + w2_over_z2) + col("d3") * it.w1
          + col("d4") * it.w4)
    L2 = dz1["w2"] - col("d2") * dz2["w1"] + col("d5") * dz2["w4"]
    return L1 - N1, L2 - N2


def _shock_defects(it: Iterate, st: dict, inputs: SolverInputs):
    """Remainders of the Rankine-Hugoniot conditions and the shock-slope relation."""
    bg, grid, cf = inputs.background, inputs.grid, inputs.coeffs
    gas = bg.gas
    z2 = grid.z2
    x_s = st["D0"][0]
    try:
        tr = inputs.view.evaluate(x_s, z2)
    except Exception as exc:
        raise StageError("shock-trace", exc) from exc
    rho_m, ux_m, ur_m, uth_m, P_m = tr["rho"], tr["u_x"], tr["u_r"], tr["u_theta"], tr["P"]
    rho, ux, ur, P = st["rho"][0], st["u_x"][0], st["u_r"][0], st["P"][0]
    rho_dot = rho - st["rho_b"][0]

    jump_ur = ur - ur_m
    jump_P = P - P_m
    slope = rho_m * ux_m * jump_ur / (jump_P + rho_m * ur_m * jump_ur)
    j_m = rho_m * ux_m - slope * rho_m * ur_m
    j_p = rho * ux - slope * rho * ur
    E_mass = j_p - j_m
    E_mom = (j_p * ux + P) - (j_m * ux_m + P_m)

    Lb = grid.Lb
    rho_p, u_p, _, c2_p = (float(v) for v in bg.plus(Lb))
    rho_mb = float(bg.minus(Lb)[0])
    m = bg.mass_flux
    drho_g = (rho_p - rho_mb) * float(bg.force.g(Lb))
    w1s, w4s = it.w1[0], it.w4[0]
    L_mass = rho_p * w1s + u_p * rho_dot
    L_mom = 2.0 * m * w1s + (u_p**2 + c2_p) * rho_dot + drho_g * it.w5
    R11 = L_mass - E_mass
    R12 = L_mom - E_mom
    R2 = (u_p * R12 - (u_p**2 + c2_p) * R11) / (rho_p * (u_p**2 - c2_p))
    R1 = (R11 - rho_p * R2) / u_p
    R13 = w4s - u_p * w1s - (c2_p / rho_p) * rho_dot
    R3 = (R12 - u_p * R11) / rho_p + R13
    R4 = R3 - cf.beta * R2

    dpsi = 2.0 * jump_ur / (st["r_over_z2"][0] * jump_P)
    h1 = dpsi - cf.a1 * it.w2[0]
    trace = dict(tr, x=x_s, jump_P=jump_P, slope=slope)
    return R1, R2, R3, R4, h1, trace


def nonlinear_remainders(it: Iterate, inputs: SolverInputs) -> RemainderBundle:
    bg, grid, cf, s = inputs.background, inputs.grid, inputs.coeffs, inputs.samples
    gas = bg.gas
    h2 = grid.h2
    z2 = grid.z2
    st = downstream_state(it, inputs)
    F3, F4 = _interior_defects(it, st, inputs)
    R1, R2, R3, R4, h1, trace = _shock_defects(it, st, inputs)

    # exit condition P = P_b(L2) + sigma P_ex(r)
    rho_e, u_e, P_e, _ = (float(v) for v in bg.plus(grid.L2))
    data = inputs.data
    N_exit = (st["P"][-1] - P_e - data.sigma * data.exit_pressure.value(st["r"][-1])) / (-rho_e * u_e)
    e_exit = it.w1[-1] - it.w4[-1] / u_e - N_exit
    h3 = R4 / u_e + e_exit

    # wall slip u_r = sigma f'(x) u_x at z2 = M
    h4 = data.wall_slope(st["D0"][:, -1]) * (st["u_b"][:, -1] + it.w1[:, -1])

    d4, d5 = s["d4"][:, None], s["d5"][:, None]
    G1 = F3 - d4 * R4[None, :]
    dR4 = d_z2(R4, h2, parity=1)
    G2 = F4 - d5 * dR4[None, :]
    tail = lambda f: cumulative_trapezoid(f[..., ::-1], -z2[::-1], axis=-1, initial=0.0)[..., ::-1]
    I = tail(F4) - d5 * (R4[-1] - R4[None, :])
    h2v = cf.b2 * h1 + d_z2(R2, h2, parity=1)

    H1 = tail(h1)
    q2 = R2 / cf.b4 - I[0] - (cf.b2 / cf.b4) * H1
    q3 = s["d2"][-1] * h3 - I[-1]
    Gc1 = -s["lambda1"][:, None] * I
    Gc2 = (s["lambda0"] / s["d1"])[:, None] * cumulative_trapezoid(G1, z2, axis=1, initial=0.0)
    Gc3 = s["lambda3"][:, None] * (q2 + I[0])[None, :]
    return RemainderBundle(F3, F4, G1, G2, I, R1, R2, R3, R4, h1, h2v, h3, h4, q2, q3, Gc1, Gc2, Gc3,
                           trace, st)
