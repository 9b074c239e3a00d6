"""Independent checks of a computed transonic flow.

Everything here reads only ``PhysicalFields`` (structured blocks in physical
coordinates plus the shock curve); nothing depends on how the solver
discretised the problem.  Derivatives on the curvilinear blocks use the
metric chain rule with second-order differences in the logical indices.
Thresholds are not applied here; callers decide what passes.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import AxishockError, OutOfDomain
from .fields import FieldBlock, PhysicalFields

EULER_KEYS = ("euler_mass", "euler_mom_x", "euler_mom_r", "euler_swirl")

# The subsonic solution is only controlled in norms weighted by the distance
# to the circles where the shock and the exit meet the wall; derivatives may
# blow up there.  Max-norm residuals are therefore also reported on the nodes
# at least this distance away from those circles.
CORNER_EXCLUSION = 0.1


@dataclass
class ResidualReport:
    values: dict = field(default_factory=dict)   # stable keys, max-norm values
    l2: dict = field(default_factory=dict)       # RMS values for the same keys where defined
    h: float = float("nan")

    def to_json(self) -> str:
        return json.dumps({"values": self.values, "l2": self.l2, "h": self.h}, indent=2, sort_keys=True)

    def merged(self, other: "ResidualReport") -> "ResidualReport":
        h = self.h if np.isfinite(self.h) else other.h
        return ResidualReport({**self.values, **other.values}, {**self.l2, **other.l2}, h)

    def flat(self) -> dict:
        out = dict(self.values)
        out["h"] = self.h
        return out


# ---------------------------------------------------------------- derivatives

def _curvilinear_derivatives(block: FieldBlock):
    """Return a function f -> (f_x, f_r) using the block's metric."""
    x_i, x_j = np.gradient(block.x, edge_order=2)
    r_i, r_j = np.gradient(block.r, edge_order=2)
    jac = x_i * r_j - x_j * r_i

    def grad(f):
        f_i, f_j = np.gradient(f, edge_order=2)
        return (f_i * r_j - f_j * r_i) / jac, (f_j * x_i - f_i * x_j) / jac

    return grad


def block_spacing(block: FieldBlock) -> float:
    dx = np.max(np.abs(np.diff(block.x, axis=0)))
    dr = np.max(np.abs(np.diff(block.r, axis=1)))
    return float(max(dx, dr))


def euler_equation_residuals(block: FieldBlock) -> dict:
    """Pointwise residuals of mass, axial/radial momentum and angular momentum transport."""
    grad = _curvilinear_derivatives(block)
    rho, ux, ur, uth, P, r = block.rho, block.u_x, block.u_r, block.u_theta, block.P, block.r
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_r = np.where(r > 0, 1.0 / np.where(r > 0, r, 1.0), np.nan)
    mx, _ = grad(rho * ux)
    _, mr = grad(r * rho * ur)
    ux_x, ux_r = grad(ux)
    ur_x, ur_r = grad(ur)
    P_x, P_r = grad(P)
    G_x, G_r = grad(r * uth)
    return {
        "euler_mass": mx + mr * inv_r,
        "euler_mom_x": rho * (ux * ux_x + ur * ux_r) + P_x - rho * block.dPhi_dx,
        "euler_mom_r": rho * (ux * ur_x + ur * ur_r) - rho * uth**2 * inv_r + P_r - rho * block.dPhi_dr,
        "euler_swirl": rho * (ux * G_x + ur * G_r) * inv_r,
    }


def corner_points(fields: PhysicalFields) -> np.ndarray:
    """(x, r) of the shock-wall and exit-wall corners in the meridional plane."""
    d = fields.downstream
    return np.array([[fields.shock_x[-1], fields.shock_r[-1]], [d.x[-1, -1], d.r[-1, -1]]])


def corner_distance(fields: PhysicalFields, x, r) -> np.ndarray:
    pts = corner_points(fields)
    return np.min([np.hypot(x - px, r - pr) for px, pr in pts], axis=0)


def _upstream_mask(fields: PhysicalFields) -> np.ndarray:
    """Interior upstream nodes strictly ahead of the shock."""
    up = fields.upstream
    order = np.argsort(fields.shock_r)
    xi = np.interp(up.r, fields.shock_r[order], fields.shock_x[order])
    mask = up.x < xi
    mask[[0, -1], :] = False
    mask[:, [0, -1]] = False
    return mask


def _interior_mask(block: FieldBlock) -> np.ndarray:
    mask = np.zeros(block.shape, dtype=bool)
    mask[1:-1, 1:-1] = True
    return mask


def _masked_norms(values, mask):
    v = np.abs(values[mask])
    if not v.size:
        return 0.0, 0.0
    return float(np.max(v)), float(np.sqrt(np.mean(v**2)))


def euler_residual(fields: PhysicalFields, corner_exclusion: float = CORNER_EXCLUSION) -> ResidualReport:
    """Max and RMS residuals of the four Euler equations on each side of the shock.

    Axis rows and block edges are excluded, so only centred differences enter.
    Keys ``<equation>_<side>`` and ``<equation>`` (worse side) skip the nodes
    within ``corner_exclusion`` of the shock-wall and exit-wall corners;
    the ``_full`` variants keep them.
    """
    rep = ResidualReport(h=max(block_spacing(fields.upstream), block_spacing(fields.downstream)))
    for side, block, mask in (("upstream", fields.upstream, _upstream_mask(fields)),
                              ("downstream", fields.downstream, _interior_mask(fields.downstream))):
        away = mask & (corner_distance(fields, block.x, block.r) >= corner_exclusion)
        res = euler_equation_residuals(block)
        for key, val in res.items():
            rep.values[f"{key}_{side}"], rep.l2[f"{key}_{side}"] = _masked_norms(val, away)
            rep.values[f"{key}_{side}_full"], rep.l2[f"{key}_{side}_full"] = _masked_norms(val, mask)
    for key in EULER_KEYS:
        for suffix in ("", "_full"):
            a, b = f"{key}_upstream{suffix}", f"{key}_downstream{suffix}"
            rep.values[key + suffix] = max(rep.values[a], rep.values[b])
            rep.l2[key + suffix] = max(rep.l2[a], rep.l2[b])
    return rep


# ---------------------------------------------------------------- shock traces

_TRACE = ("rho", "u_x", "u_r", "u_theta", "P")


def upstream_trace(fields: PhysicalFields) -> dict:
    """Upstream state at the shock points by quadratic extrapolation in x.

    At each of the three grid columns nearest the shock on the upstream side
    the fields are interpolated radially, then extrapolated to x = xi.
    """
    up = fields.upstream
    xcol = up.x[:, 0]
    if np.any(np.ptp(up.x, axis=1) > 1e-12 * max(1.0, np.max(np.abs(xcol)))):
        raise AxishockError("upstream block must have constant x along each column")
    splines = {}

    def column(i):
        if i not in splines:
            data = np.stack([getattr(up, n)[i] for n in _TRACE], axis=-1)
            splines[i] = CubicSpline(up.r[i], data, axis=0)
        return splines[i]

    out = np.empty((fields.shock_x.size, len(_TRACE)))
    for j, (xs, rs) in enumerate(zip(fields.shock_x, fields.shock_r)):
        k = int(np.searchsorted(xcol, xs, side="right")) - 1
        if k < 2 or xs > xcol[-1]:
            raise OutOfDomain("shock trace extrapolation outside the upstream block")
        nodes = (k - 2, k - 1, k)
        xn = xcol[list(nodes)]
        vals = np.stack([column(i)(min(rs, up.r[i, -1])) for i in nodes])
        weights = [np.prod([(xs - xn[b]) / (xn[a] - xn[b]) for b in range(3) if b != a]) for a in range(3)]
        out[j] = np.tensordot(weights, vals, axes=1)
    return {n: out[:, q] for q, n in enumerate(_TRACE)}


def downstream_trace(fields: PhysicalFields) -> dict:
    """Downstream state at the shock; the block's first column lies on the shock."""
    d = fields.downstream
    if np.max(np.abs(d.x[0] - fields.shock_x)) > 1e-12:
        raise AxishockError("downstream block does not start on the shock")
    return {n: getattr(d, n)[0].copy() for n in _TRACE}


def shock_slope_of(fields: PhysicalFields) -> np.ndarray:
    return np.gradient(fields.shock_x, fields.shock_r, edge_order=2)


def rh_residual(fields: PhysicalFields, corner_exclusion: float = CORNER_EXCLUSION) -> ResidualReport:
    """The four jump conditions [F_x] - xi'(r) [F_r] = 0 along the shock.

    ``rh_k`` is the maximum over shock points at least ``corner_exclusion``
    from the shock-wall corner, ``rh_k_full`` over the whole shock.
    """
    m, p = upstream_trace(fields), downstream_trace(fields)
    ds = shock_slope_of(fields)

    def jump(fn):
        return fn(p) - fn(m)

    conds = {
        "rh_1": jump(lambda s: s["rho"] * s["u_x"]) - ds * jump(lambda s: s["rho"] * s["u_r"]),
        "rh_2": jump(lambda s: s["rho"] * s["u_x"] ** 2 + s["P"]) - ds * jump(lambda s: s["rho"] * s["u_x"] * s["u_r"]),
        "rh_3": jump(lambda s: s["rho"] * s["u_x"] * s["u_r"]) - ds * jump(lambda s: s["rho"] * s["u_r"] ** 2 + s["P"]),
        "rh_4": jump(lambda s: s["rho"] * s["u_x"] * s["u_theta"]) - ds * jump(lambda s: s["rho"] * s["u_r"] * s["u_theta"]),
    }
    rep = ResidualReport(h=block_spacing(fields.downstream))
    every = np.ones(fields.shock_r.shape, dtype=bool)
    away = corner_distance(fields, fields.shock_x, fields.shock_r) >= corner_exclusion
    for k, v in conds.items():
        rep.values[k], rep.l2[k] = _masked_norms(v, away)
        rep.values[k + "_full"], rep.l2[k + "_full"] = _masked_norms(v, every)
    return rep


def entropy_check(fields: PhysicalFields) -> float:
    """min over the shock of P+ - P-; positive means the pressure rises across it."""
    return float(np.min(downstream_trace(fields)["P"] - upstream_trace(fields)["P"]))


# ---------------------------------------------------------------- axis conditions

def _lagrange_derivative(r, f, order: int):
    """Derivative of the interpolating polynomial through (r[k], f[k]) at r[0]."""
    coef = np.polyfit(r - r[0], f, len(r) - 1)
    return float(np.polyval(np.polyder(coef, order), 0.0)) if order else float(f[0])


def axis_conditions(block: FieldBlock, columns=None) -> dict:
    """One-sided axis values of u_r, u_theta and the radial derivatives that vanish by symmetry."""
    columns = np.arange(block.shape[0]) if columns is None else np.asarray(columns)
    n = columns.size
    out = {k: np.zeros(n) for k in ("u_r", "u_theta", "dr_u_x", "dr_P", "dr2_u_r", "dr_u_theta")}
    for k, i in enumerate(columns):
        r3, r4 = block.r[i, :3], block.r[i, :4]
        out["u_r"][k] = block.u_r[i, 0]
        out["u_theta"][k] = block.u_theta[i, 0]
        out["dr_u_x"][k] = _lagrange_derivative(r3, block.u_x[i, :3], 1)
        out["dr_P"][k] = _lagrange_derivative(r3, block.P[i, :3], 1)
        out["dr_u_theta"][k] = _lagrange_derivative(r3, block.u_theta[i, :3], 1)
        out["dr2_u_r"][k] = _lagrange_derivative(r4, block.u_r[i, :4], 2)
    return out


def compatibility_check(fields: PhysicalFields) -> ResidualReport:
    rep = ResidualReport(h=max(block_spacing(fields.upstream), block_spacing(fields.downstream)))
    ahead = np.flatnonzero(fields.upstream.x[:, 0] < fields.shock_x[0])
    for side, block, cols in (("upstream", fields.upstream, ahead), ("downstream", fields.downstream, None)):
        for k, v in axis_conditions(block, cols).items():
            rep.values[f"compat_{k}_{side}"] = float(np.max(np.abs(v)))
    return rep


def verify_all(fields: PhysicalFields) -> ResidualReport:
    rep = euler_residual(fields).merged(rh_residual(fields)).merged(compatibility_check(fields))
    rep.values["entropy_min"] = entropy_check(fields)
    rep.values["shock_displacement"] = fields.shock_displacement
    return rep


def check_thresholds(report: ResidualReport, thresholds: dict) -> list[str]:
    """Names of checks that fail.  ``entropy_min`` is a lower bound, all others upper bounds."""
    failed = []
    for key, limit in thresholds.items():
        if key not in report.values:
            failed.append(f"{key} (missing)")
            continue
        v = report.values[key]
        ok = v > limit if key == "entropy_min" else v <= limit
        if not (ok and np.isfinite(v)):
            failed.append(key)
    return failed


# ---------------------------------------------------------------- run families

def structural_claims(pressures=None, shock_positions=None, sigmas=None, deviations=None,
                      shock_displacements=None) -> dict:
    """Claims over families of runs.

    (a) strict decrease of the shock position in the exit pressure,
    (b) through-origin least-squares fit of deviation norms against sigma with its R^2,
    (c) the ratios |xi - Lb|/sigma and their spread.
    """
    out = {}
    if pressures is not None:
        P = np.asarray(pressures, dtype=float)
        L = np.asarray(shock_positions, dtype=float)
        if P.size < 2:
            raise ValueError("need at least two pressure runs")
        order = np.argsort(P)
        out["monotone_decreasing"] = bool(np.all(np.diff(L[order]) < 0))
    if sigmas is not None:
        s = np.asarray(sigmas, dtype=float)
        if s.size < 2:
            raise ValueError("need at least two sigma runs")
        if deviations is not None:
            d = np.asarray(deviations, dtype=float)
            slope, r2 = through_origin_fit(s, d)
            out["deviation_slope"] = slope
            out["deviation_r2"] = r2
        if shock_displacements is not None:
            x = np.asarray(shock_displacements, dtype=float)
            pos = s > 0
            c = x[pos] / s[pos]
            out["shock_constants"] = c.tolist()
            out["shock_constant_spread"] = float((c.max() - c.min()) / c.mean()) if c.size else 0.0
    return out


def through_origin_fit(x, y) -> tuple[float, float]:
    """Slope of y = a x and R^2 = 1 - SS_res/SS_tot with SS_tot about the mean of y."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    a = float(x @ y / (x @ x))
    ss_res = float(np.sum((y - a * x) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    return a, 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
