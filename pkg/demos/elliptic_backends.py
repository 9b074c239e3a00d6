"""Finite-difference and Bessel-mode elliptic backends side by side.

On smooth data of the form A(z1) + B(z1) z2^2 both backends converge at
second order and agree to round-off levels.  Inside the full fixed point the
right-hand sides carry the corner behaviour where the shock and the exit meet
the wall, and the agreement there is limited by that corner rather than by
either solver.
"""
import numpy as np
from scipy.special import jn_zeros

from axishock.config import RunConfig
from axishock.pipeline import run_2d, solve_background
from axishock.subsonic import (EllipticProblem, FDEllipticSolver, Grid, ModeEllipticSolver,
                               compute_coefficients, neumann_disk_eigenvalues)
from axishock.transform import MassGeometry


def smooth_problem(grid, cf):
    Z1, Z2 = np.meshgrid(grid.z1, grid.z2, indexing="ij")
    B = lambda z: 0.3 * np.exp(0.5 * z)
    phi = lambda z1, z2: np.sin(z1) + B(z1) * z2**2
    phi1 = lambda z1, z2: np.cos(z1) + 0.5 * B(z1) * z2**2
    f = (cf.dlambda1(Z1) * phi1(Z1, Z2) + cf.lambda1(Z1) * (-np.sin(Z1) + 0.25 * B(Z1) * Z2**2)
         + cf.lambda2(Z1) * 4 * B(Z1) - cf.lambda3(Z1) * cf.b5 * phi(grid.Lb, Z2))
    q2 = phi1(grid.Lb, grid.z2) - cf.b5 * phi(grid.Lb, grid.z2)
    q3 = phi1(grid.L2, grid.z2)
    return EllipticProblem(grid, cf, f, q2, q3, 2 * grid.M * B(grid.z1)), phi(Z1, Z2)


def main():
    cfg = RunConfig()
    bg = solve_background(cfg)
    geom = MassGeometry(np.sqrt(bg.mass_flux / 2), np.sqrt(2.0 / bg.mass_flux), bg.Lb, bg.L2)
    cf = compute_coefficients(bg, geom)
    j = jn_zeros(1, 1)[0]
    mu = neumann_disk_eigenvalues(geom.M, 2)[1]
    print(f"first nonzero disk eigenvalue {mu:.15f}, (j11/M)^2 = {(j / geom.M) ** 2:.15f}")
    print(f"\n{'grid':>8} {'fd error':>10} {'mode error':>10} {'fd - modes':>10}")
    for n1, n2 in ((32, 16), (64, 32), (128, 64)):
        g = Grid(bg.Lb, bg.L2, geom.M, n1, n2)
        pr, exact = smooth_problem(g, cf)
        a = FDEllipticSolver(g, cf).solve(pr).phi
        b = ModeEllipticSolver(g, cf, 32).solve(pr).phi
        print(f"{n1:>4}x{n2:<3} {np.abs(a - exact).max():10.2e} {np.abs(b - exact).max():10.2e} "
              f"{np.abs(a - b).max():10.2e}")

    print("\nfull pipeline, sigma = 0.005:")
    for n1, n2 in ((64, 32), (128, 64)):
        runs = {be: run_2d(cfg.replace(n1=n1, n2=n2, backend=be), bg) for be in ("fd", "modes")}
        d = max(np.abs(x - y).max() for x, y in zip(runs["fd"].iterate.fields(), runs["modes"].iterate.fields()))
        print(f"  {n1}x{n2}: max |fd - modes| over w1..w4 = {d:.2e}")


if __name__ == "__main__":
    main()
