"""Second-order elliptic problem for the potential.

On the rectangle [Lb, L2] x [0, M]:

    (lambda1 phi_z1)_z1 + lambda2 (1/z2)(z2 phi_z2)_z2 - lambda3 b5 phi(Lb, z2) = f,
    phi_z1 = b5 phi + q2 at z1 = Lb,   phi_z1 = q3 at z1 = L2,
    phi_z2 = h4 at z2 = M,             phi even about the axis.

Two backends share the same z1 discretisation: a sparse finite-difference
solve of the whole grid and a Fourier-Bessel expansion in z2 with a
tridiagonal solve per mode.  Interior rows use the flux form; boundary rows
eliminate a ghost value through the boundary condition, which keeps the
scheme second-order consistent pointwise on the boundary nodes.  The nonlocal
term couples every column to the shock column.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.interpolate import CubicSpline
from scipy.linalg import solve_banded
from scipy.sparse.linalg import splu
from scipy.special import j0, jn_zeros

from ..errors import ModeFailure, SolverError
from ..transform import d_z1, d_z2
from .coefficients import CoefficientTable
from .grid import Grid


@dataclass
class EllipticProblem:
    grid: Grid
    coeffs: CoefficientTable
    f: np.ndarray    # source on the nodes
    q2: np.ndarray   # Robin data at z1 = Lb
    q3: np.ndarray   # Neumann data at z1 = L2
    h4: np.ndarray   # Neumann data at z2 = M

    @classmethod
    def from_remainders(cls, bundle, inputs) -> "EllipticProblem":
        g = inputs.grid
        f = d_z1(bundle.Gc1, g.h1) + d_z2(bundle.Gc2, g.h2, parity=-1) + bundle.Gc3
        return cls(g, inputs.coeffs, f, bundle.q2, bundle.q3, bundle.h4)


@dataclass
class EllipticSolution:
    phi: np.ndarray
    backend: str
    residual: float = float("nan")
    info: dict = field(default_factory=dict)


class _Z1Stencil:
    """Flux-form z1 operator with ghost-point boundary rows.

    On a boundary node (lambda1 phi')' = lambda1 phi'' + lambda1' phi' with the
    ghost value eliminated through phi' = b5 phi + q2 (shock) or phi' = q3 (exit).
    """

    def __init__(self, grid: Grid, coeffs: CoefficientTable):
        z1, h = grid.z1, grid.h1
        self.h = h
        self.lam_half = coeffs.lambda1(z1[:-1] + 0.5 * h)
        self.lam_Lb = float(coeffs.lambda1(grid.Lb))
        self.lam_L2 = float(coeffs.lambda1(grid.L2))
        self.dlam_Lb = float(coeffs.dlambda1(grid.Lb))
        self.dlam_L2 = float(coeffs.dlambda1(grid.L2))
        self.lam2 = coeffs.lambda2(z1)
        self.coupling = coeffs.lambda3(z1) * coeffs.b5
        self.b5 = b5 = coeffs.b5
        n = grid.n1 + 1
        lo, di, up = np.zeros(n), np.zeros(n), np.zeros(n)
        lh = self.lam_half / h**2
        up[:-1] += lh
        lo[1:] += lh
        di[:-1] -= lh
        di[1:] -= lh
        up[0] = 2.0 * self.lam_Lb / h**2
        di[0] = -2.0 * self.lam_Lb / h**2 - 2.0 * self.lam_Lb * b5 / h + self.dlam_Lb * b5
        lo[-1] = 2.0 * self.lam_L2 / h**2
        di[-1] = -2.0 * self.lam_L2 / h**2
        self.lower, self.diag, self.upper = lo, di, up

    def boundary_rhs(self, q2, q3):
        """Contribution of the boundary data, already moved to the right-hand side."""
        n = self.lam2.size
        h = self.h
        out = np.zeros((n,) + np.shape(q2))
        out[0] = (2.0 * self.lam_Lb / h - self.dlam_Lb) * np.asarray(q2)
        out[-1] = -(2.0 * self.lam_L2 / h + self.dlam_L2) * np.asarray(q3)
        return out


class FDEllipticSolver:
    """Sparse direct solver; the matrix is factored once per grid."""

    def __init__(self, grid: Grid, coeffs: CoefficientTable):
        self.grid = grid
        self.st = st = _Z1Stencil(grid, coeffs)
        n1, n2 = grid.n1 + 1, grid.n2 + 1
        h2 = grid.h2
        z = grid.z2
        idx = np.arange(n1 * n2).reshape(n1, n2)
        rows, cols, vals = [], [], []

        def add(r, c, v):
            r, c, v = np.broadcast_arrays(r, c, v)
            rows.append(r.ravel())
            cols.append(c.ravel())
            vals.append(v.ravel())

        # z1 part
        add(idx, idx, np.repeat(st.diag[:, None], n2, axis=1))
        add(idx[1:], idx[:-1], np.repeat(st.lower[1:, None], n2, axis=1))
        add(idx[:-1], idx[1:], np.repeat(st.upper[:-1, None], n2, axis=1))
        # z2 part: (1/z)(z phi')' in flux form, 4(phi1 - phi0)/h^2 on the axis and
        # phi'' + phi'/z with a ghost value through phi' = h4 on the wall
        lam2 = st.lam2[:, None]
        zp = (z[1:-1] + 0.5 * h2) / (z[1:-1] * h2**2)
        zm = (z[1:-1] - 0.5 * h2) / (z[1:-1] * h2**2)
        add(idx[:, 1:-1], idx[:, 2:], lam2 * zp)
        add(idx[:, 1:-1], idx[:, :-2], lam2 * zm)
        add(idx[:, 1:-1], idx[:, 1:-1], -lam2 * (zp + zm))
        add(idx[:, 0], idx[:, 1], 4.0 * st.lam2 / h2**2)
        add(idx[:, 0], idx[:, 0], -4.0 * st.lam2 / h2**2)
        add(idx[:, -1], idx[:, -2], 2.0 * st.lam2 / h2**2)
        add(idx[:, -1], idx[:, -1], -2.0 * st.lam2 / h2**2)
        self.wall_factor = 2.0 / h2 + 1.0 / grid.M
        # nonlocal coupling to the shock column
        add(idx, np.repeat(idx[:1], n1, axis=0), -np.repeat(st.coupling[:, None], n2, axis=1))

        A = sparse.csc_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                              shape=(n1 * n2, n1 * n2))
        self.A = A
        try:
            self.lu = splu(A)
        except RuntimeError as exc:
            raise SolverError(f"elliptic matrix is singular: {exc}") from exc

    def rhs(self, problem: EllipticProblem) -> np.ndarray:
        b = np.array(problem.f, dtype=float)
        b += self.st.boundary_rhs(problem.q2, problem.q3)
        b[:, -1] -= self.st.lam2 * self.wall_factor * problem.h4
        return b

    def solve(self, problem: EllipticProblem) -> EllipticSolution:
        b = self.rhs(problem).ravel()
        phi = self.lu.solve(b)
        if not np.all(np.isfinite(phi)):
            raise SolverError("elliptic solve produced non-finite values")
        res = float(np.max(np.abs(self.A @ phi - b)) / max(1.0, np.max(np.abs(b))))
        return EllipticSolution(phi.reshape(self.grid.shape), "fd", res)


def neumann_disk_eigenvalues(M: float, n: int) -> np.ndarray:
    """Eigenvalues mu of -(1/z)(z beta')' with beta'(0) = beta'(M) = 0."""
    roots = np.concatenate([[0.0], jn_zeros(1, n - 1)]) if n > 1 else np.zeros(1)
    return (roots / M) ** 2


class ModeEllipticSolver:
    """Fourier-Bessel expansion in z2 with the shared z1 stencil per mode."""

    def __init__(self, grid: Grid, coeffs: CoefficientTable, n_modes: int = 32, n_quad: int | None = None):
        self.grid = grid
        self.st = _Z1Stencil(grid, coeffs)
        self.n_modes = n_modes
        M = grid.M
        self.mu = neumann_disk_eigenvalues(M, n_modes)
        k = np.sqrt(self.mu)
        norm = np.sqrt(0.5 * M**2 * j0(k * M) ** 2)
        self.norm = norm
        nq = n_quad or max(8 * grid.n2, 4 * n_modes + 64)
        xq, wq = np.polynomial.legendre.leggauss(nq)
        self.zq = 0.5 * M * (xq + 1.0)
        self.wq = 0.5 * M * wq * self.zq
        self.basis_q = j0(np.outer(k, self.zq)) / norm[:, None]
        self.basis_nodes = j0(np.outer(k, grid.z2)) / norm[:, None]

    def project(self, values: np.ndarray) -> np.ndarray:
        """Coefficients <v, beta_k> in L^2(z dz) of nodal data along the last axis."""
        sp = CubicSpline(self.grid.z2, values, axis=-1, bc_type=((1, np.zeros(np.shape(values)[:-1])), "not-a-knot"))
        return sp(self.zq) @ (self.basis_q * self.wq).T

    def _apply_z1(self, v: np.ndarray) -> np.ndarray:
        """The z1 stencil (boundary rows included) applied along the first axis."""
        st = self.st
        out = st.diag[:, None] * v
        out[:-1] += st.upper[:-1, None] * v[1:]
        out[1:] += st.lower[1:, None] * v[:-1]
        return out

    def solve(self, problem: EllipticProblem) -> EllipticSolution:
        st, g = self.st, self.grid
        # lift the wall data with l = h4 z2^2/(2M) so the expanded part has a
        # homogeneous Neumann condition and its series converges quickly
        lift = problem.h4[:, None] * g.z2[None, :] ** 2 / (2.0 * g.M)
        rhs_nodes = (np.array(problem.f, dtype=float) + st.boundary_rhs(problem.q2, problem.q3)
                     - self._apply_z1(lift) - 2.0 * st.lam2[:, None] * problem.h4[:, None] / g.M
                     + st.coupling[:, None] * lift[:1])
        rhs = self.project(rhs_nodes)                     # (n1+1, K)
        X = np.empty_like(rhs)
        ab = np.zeros((3, st.diag.size))
        ab[0, 1:] = st.upper[:-1]
        ab[2, :-1] = st.lower[1:]
        for k, mu in enumerate(self.mu):
            ab[1] = st.diag - st.lam2 * mu
            sol = solve_banded((1, 1), ab, np.column_stack([rhs[:, k], st.coupling]))
            xp, xh = sol[:, 0], sol[:, 1]
            denom = 1.0 - xh[0]
            if abs(denom) < 1e-12 or not np.all(np.isfinite(sol)):
                raise ModeFailure(f"degenerate shock-column closure in mode {k}", k)
            X[:, k] = xp + (xp[0] / denom) * xh
        phi = X @ self.basis_nodes + lift
        return EllipticSolution(phi, "modes", info={"n_modes": self.n_modes,
                                                    "tail": float(np.max(np.abs(X[:, -1])))})


def solve_elliptic_fd(problem: EllipticProblem) -> EllipticSolution:
    return FDEllipticSolver(problem.grid, problem.coeffs).solve(problem)


def solve_elliptic_modes(problem: EllipticProblem, n_modes: int = 32) -> EllipticSolution:
    return ModeEllipticSolver(problem.grid, problem.coeffs, n_modes).solve(problem)
