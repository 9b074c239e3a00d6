"""Quasi one-dimensional transonic shock with a stabilising external force.

Solves the reference background (gamma = 1.4, g = 0.5 on [0, 2], inlet
rho = 1, u = 2) for a few exit pressures and shows that the shock moves
upstream as the exit pressure rises, and that each exit pressure in the
admissible bracket picks exactly one shock position.
"""
import numpy as np

from axishock.config import RunConfig


def main():
    prob = RunConfig().background_problem()
    P1, P2 = prob.admissible_bracket()
    print(f"admissible exit pressures: ({P1:.6f}, {P2:.6f})")
    print(f"{'P_e':>10} {'Lb':>12} {'P+ - P-':>10} {'Mach-':>8} {'Mach+':>8}")
    for Pe in np.linspace(P1, P2, 9)[1:-1]:
        bg = prob.solve(Pe)
        rho_m, u_m, _, c2_m = bg.minus(bg.Lb)
        rho_p, u_p, _, c2_p = bg.plus(bg.Lb)
        print(f"{Pe:10.5f} {bg.Lb:12.8f} {bg.pressure_jump():10.5f} "
              f"{u_m / np.sqrt(c2_m):8.4f} {u_p / np.sqrt(c2_p):8.4f}")

    # round trip: shock position -> exit pressure -> shock position
    for s in (0.25, 1.0, 1.75):
        back = prob.solve(prob.exit_pressure_of_shock_position(s)).Lb
        print(f"shock at {s:.2f} recovered as {back:.12f}")


if __name__ == "__main__":
    main()
