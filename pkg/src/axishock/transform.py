"""Mass coordinates and the fixed-domain map.

The modified Lagrangian coordinates are y1 = x and
y2 = (int_0^r s rho u_x ds)^(1/2); streamlines become y2 = const, the axis is
y2 = 0 and the wall is y2 = M.  Behind the shock the free boundary
y1 = Lb + w5(y2) is moved to z1 = Lb by the map

    y1 = D0(z1, z2) = z1 + (L2 - z1)/(L2 - Lb) * w5(z2),   y2 = z2.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid
from scipy.interpolate import CubicSpline, RectBivariateSpline

from .errors import MapError, OutOfDomain, TransformError


# ---------------------------------------------------------------- differences

def d_z1(f, h):
    """Second-order derivative along axis 0 (one-sided at the ends)."""
    return np.gradient(f, h, axis=0, edge_order=2)


def d_z2(f, h, parity=None):
    """Second-order derivative along the last axis.

    ``parity`` is +1 for fields even about z2 = 0, -1 for odd fields and None
    for a plain one-sided closure.  The wall end is always one-sided.
    """
    f = np.asarray(f, dtype=float)
    out = np.gradient(f, h, axis=-1, edge_order=2)
    if parity == 1:
        out[..., 0] = 0.0
    elif parity == -1:
        out[..., 0] = (f[..., 1] - (2.0 * f[..., 0] - f[..., 1])) / (2.0 * h)
    return out


# ---------------------------------------------------------------- mass coordinates

def mass_coordinate(r, rho_ux):
    """y2 on each x-slice (rows of ``r``) by the cumulative trapezoid rule."""
    r = np.atleast_2d(np.asarray(r, dtype=float))
    flux = np.atleast_2d(np.asarray(rho_ux, dtype=float))
    if np.any(flux <= 0):
        raise TransformError("axial mass flux must be positive")
    ytil = np.stack([cumulative_trapezoid(ri * fi, ri, initial=0.0) for ri, fi in zip(r, flux)])
    return np.sqrt(ytil)


def radius_from_mass(z2, density_flux, drift=None, sweeps: int = 3):
    """Physical radius along lines of constant z1 from the mass coordinate.

    On a vertical line (x fixed) r = 2 (int_0^z2 s/(rho u_x) ds)^(1/2).  When
    the line moves in x as z2 varies, the mass-flux differential
    2 y2 dy2 = r rho (u_x dr - u_r dx) gives

        d(r^2)/dz2 = 4 z2/(rho u_x) + 2 r (u_r/u_x) dx/dz2,

    and ``drift`` is (u_r/u_x) dx/dz2.  The ODE is integrated by the
    trapezoidal rule with a few fixed-point sweeps per step.
    """
    z2 = np.asarray(z2, dtype=float)
    flux = np.asarray(density_flux, dtype=float)
    if np.any(flux <= 0):
        raise TransformError("axial mass flux must be positive")
    base = 4.0 * z2 / flux
    if drift is None:
        return np.sqrt(cumulative_trapezoid(base, z2, axis=-1, initial=0.0))
    drift = np.asarray(drift, dtype=float)
    R = np.zeros(flux.shape)
    for j in range(1, z2.size):
        h = z2[j] - z2[j - 1]
        Fj = base[..., j - 1] + 2.0 * np.sqrt(R[..., j - 1]) * drift[..., j - 1]
        Rn = R[..., j - 1] + h * Fj
        for _ in range(sweeps):
            Rn = R[..., j - 1] + 0.5 * h * (Fj + base[..., j] + 2.0 * np.sqrt(np.maximum(Rn, 0.0)) * drift[..., j])
        if np.any(Rn <= 0):
            raise TransformError("radius reconstruction lost monotonicity")
        R[..., j] = Rn
    return np.sqrt(R)


def radius_over_z2(z2, density_flux, r=None):
    """r/z2 with the axis limit (2/(rho u_x))^(1/2)."""
    flux = np.asarray(density_flux, dtype=float)
    if r is None:
        r = radius_from_mass(z2, flux)
    out = np.empty_like(r)
    out[..., 1:] = r[..., 1:] / z2[1:]
    out[..., 0] = np.sqrt(2.0 / flux[..., 0])
    return out


def jacobian_check(r, y2, rho_ux) -> float:
    """Minimum of r rho u_x / (2 y2); the axis value is the limit (rho u_x / 2)^(1/2)."""
    r, y2, flux = (np.atleast_2d(np.asarray(a, dtype=float)) for a in (r, y2, rho_ux))
    with np.errstate(divide="ignore", invalid="ignore"):
        jac = np.where(y2 > 0, r * flux / (2.0 * np.where(y2 > 0, y2, 1.0)),
                       np.sign(flux) * np.sqrt(np.abs(flux) / 2.0))
    return float(np.min(jac))


@dataclass(frozen=True)
class MassGeometry:
    M: float
    kappa_b: float
    Lb: float
    L2: float

    def __post_init__(self):
        if not (self.M > 0 and self.kappa_b > 0):
            raise ValueError("M and kappa_b must be positive")

    @classmethod
    def from_fields(cls, upstream, background) -> "MassGeometry":
        """M from the inlet slice of the upstream field, kappa_b from the mass flux."""
        flux = upstream.rho[0] * upstream.u_x[0]
        r = upstream.r[0]
        M = float(np.sqrt(trapezoid(r * flux, r)))
        return cls(M, float(np.sqrt(2.0 / background.mass_flux)), background.Lb, background.L2)


class UpstreamMassView:
    """The upstream field as a function of (x, y2).

    Each x-slice is re-sampled at uniform s = y2/y2_wall(x); queries use
    s = y2/M so that the wall maps to the wall on every slice.
    """

    _names = ("rho", "u_x", "u_r", "u_theta", "P")

    def __init__(self, upstream, M: float, n_s: int | None = None):
        self.field = upstream
        self.M = float(M)
        x, eta = upstream.x, upstream.eta
        r = upstream.r
        y2 = mass_coordinate(r, upstream.rho * upstream.u_x)
        n_s = n_s or eta.size
        s = np.linspace(0.0, 1.0, n_s)
        eta_of_s = np.empty((x.size, n_s))
        for i in range(x.size):
            si = y2[i] / y2[i, -1]
            eta_of_s[i] = CubicSpline(si, eta)(s)
        eta_of_s[:, 0] = 0.0
        eta_of_s[:, -1] = 1.0
        X = np.repeat(x[:, None], n_s, axis=1)
        state = upstream.evaluate(X, eta_of_s * upstream.wall[:, None])
        self._s = s
        self._splines = {name: RectBivariateSpline(x, s, getattr(state, name), kx=3, ky=3)
                         for name in self._names}
        self._radius = RectBivariateSpline(x, s, eta_of_s * upstream.wall[:, None], kx=3, ky=3)
        self.wall_mass = y2[:, -1]

    def evaluate(self, x, y2) -> dict:
        x, y2 = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y2, dtype=float))
        fx = self.field.x
        if np.any(x < fx[0] - 1e-9) or np.any(x > fx[-1] + 1e-9):
            raise OutOfDomain("shock trace outside the upstream grid")
        s = np.clip(y2 / self.M, 0.0, 1.0)
        out = {name: sp.ev(x, s) for name, sp in self._splines.items()}
        out["r"] = self._radius.ev(x, s)
        return out


# ---------------------------------------------------------------- shock and map

def shock_slope(w5, h):
    """w5' with even reflection at z2 = 0 and one-sided closure at the wall."""
    return d_z2(w5, h, parity=1)


@dataclass
class ShockCurve:
    z2: np.ndarray
    w5: np.ndarray
    Lambda: float = 0.0

    def derivative(self):
        return shock_slope(self.w5, self.z2[1] - self.z2[0])


class FixedDomainMap:
    """Chain-rule coefficients for y-derivatives on the fixed rectangle.

    With Dd = L2 - Lb - w5,

        d/dy1 = (L2 - Lb)/Dd d/dz1,
        d/dy2 = d/dz2 + (D0 - L2)(L2 - Lb) w5' / Dd^2 d/dz1.
    """

    def __init__(self, Lb: float, L2: float, z1, w5, dw5):
        self.Lb, self.L2 = float(Lb), float(L2)
        span = self.L2 - self.Lb
        w5 = np.asarray(w5, dtype=float)
        if np.any(np.abs(w5) >= 0.5 * span):
            raise MapError("shock displacement too large for the fixed-domain map")
        Dd = span - w5
        if np.any(Dd <= 0):
            raise MapError("degenerate fixed-domain map")
        z1 = np.asarray(z1, dtype=float)
        self.D0 = z1[:, None] + ((self.L2 - z1) / span)[:, None] * w5[None, :]
        self.D1 = (span / Dd)[None, :] * np.ones_like(self.D0)
        self.D2_coeff = (self.D0 - self.L2) * (span * np.asarray(dw5) / Dd**2)[None, :]

    def d_y1(self, f_z1):
        return self.D1 * f_z1

    def d_y2(self, f_z1, f_z2):
        return f_z2 + self.D2_coeff * f_z1
