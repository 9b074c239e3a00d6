import numpy as np
import pytest

from axishock.background1d import (BackgroundProblem, ForceProfile, State1D, integrate_branch,
                                   shock_jump_1d)
from axishock.errors import AdmissibilityError
from axishock.gas import GasLaw

GAS = GasLaw(1.4)
INLET = State1D(1.0, 2.0)


def problem(n_steps=2048, force=None):
    return BackgroundProblem(GAS, force or ForceProfile.constant(0.5), INLET, 0.0, 2.0, n_steps=n_steps)


def test_zero_force_keeps_state():
    br = integrate_branch(GAS, INLET, 0.0, 2.0, ForceProfile.constant(0.0), n_steps=64)
    assert np.all(br.u == INLET.u)
    assert np.all(br.rho == INLET.rho)


def test_mass_flux_constant(ref_background):
    for br in (ref_background.supersonic, ref_background.subsonic):
        np.testing.assert_allclose(br.rho * br.u, 2.0, rtol=1e-10)


def _manufactured(beta=0.3, u0=2.0):
    m = INLET.mass_flux

    def u_exact(x):
        return u0 + beta * np.sin(np.asarray(x, dtype=float))

    def g(x):
        u = u_exact(x)
        return (u - GAS.sound_speed_sq(m / u) / u) * beta * np.cos(x)

    force = ForceProfile(g=g, Phi_b=lambda x: np.zeros_like(np.asarray(x, dtype=float)))
    return u_exact, force


def test_manufactured_branch_fourth_order():
    u_exact, force = _manufactured()
    errs = []
    for n in (8, 16, 32):
        br = integrate_branch(GAS, INLET, 0.0, 2.0, force, n_steps=n)
        errs.append(np.max(np.abs(br.u - u_exact(br.x))))
    assert errs[0] / errs[1] > 12 and errs[1] / errs[2] > 12


def _bisect(G, a, b, tol=1e-12):
    fa = G(a)
    while b - a > tol:
        c = 0.5 * (a + b)
        if (G(c) > 0) == (fa > 0):
            a, fa = c, G(c)
        else:
            b = c
    return 0.5 * (a + b)


def test_jump_matches_bisection():
    m = INLET.mass_flux
    mom = m * m / INLET.rho + INLET.rho**1.4
    rho_sonic = (m * m / 1.4) ** (1 / 2.4)
    ref = _bisect(lambda r: m * m / r + r**1.4 - mom, rho_sonic, 20.0)
    plus = shock_jump_1d(GAS, INLET)
    assert abs(plus.rho - ref) < 1e-11
    assert plus.mass_flux == pytest.approx(m, rel=1e-14)


def test_sonic_upstream_unchanged():
    rho = 1.0
    c = np.sqrt(GAS.sound_speed_sq(rho))
    s = State1D(rho, float(c))
    assert shock_jump_1d(GAS, s) == s


def test_random_jumps_are_admissible():
    rng = np.random.default_rng(11)
    for _ in range(50):
        rho = rng.uniform(0.2, 3.0)
        c = np.sqrt(GAS.sound_speed_sq(rho))
        s = State1D(rho, float(c * rng.uniform(1.05, 4.0)))
        p = shock_jump_1d(GAS, s)
        assert p.u**2 < GAS.sound_speed_sq(p.rho)
        assert GAS.pressure(p.rho) > GAS.pressure(s.rho)
        assert p.rho > s.rho


def test_exit_pressure_continuous_and_decreasing():
    pb = problem(n_steps=512)
    s = np.linspace(0.01, 1.99, 100)
    P = np.array([pb.exit_pressure_of_shock_position(x) for x in s])
    assert np.all(np.diff(P) < 0)
    slope = np.max(np.abs(np.diff(P) / np.diff(s)))
    assert slope < 10.0   # no jumps: bounded difference quotients


def test_bracket_endpoints(ref_background):
    pb = problem()
    P1, P2 = pb.admissible_bracket()
    dx = pb.bracket_offset * 2.0
    assert P2 == pb.exit_pressure_of_shock_position(dx)
    assert P1 == pb.exit_pressure_of_shock_position(2.0 - dx)
    assert P1 < 5.89 < P2


@pytest.mark.parametrize("s", [0.3, 0.7, 1.0, 1.4, 1.8])
def test_round_trip(s):
    pb = problem()
    Lb = pb.solve(pb.exit_pressure_of_shock_position(s)).Lb
    assert abs(Lb - s) < 1e-8


def test_sweep_monotone():
    pb = problem()
    P1, P2 = pb.admissible_bracket()
    P = P1 + (P2 - P1) * np.arange(1, 6) / 6
    L = [pb.solve(p).Lb for p in P]
    assert np.all(np.diff(L) < 0)


def test_near_upper_bracket_shock_near_inlet():
    pb = problem()
    P1, P2 = pb.admissible_bracket()
    edge = pb.L1 + pb.bracket_offset * 2.0
    eps = 1e-3 * (P2 - P1)
    d1 = pb.solve(P2 - eps).Lb - edge
    d2 = pb.solve(P2 - eps / 2).Lb - edge
    assert 0 < d2 < d1
    assert d1 / d2 == pytest.approx(2.0, rel=0.05)     # O(eps)


def test_out_of_bracket_reports_bracket():
    pb = problem()
    with pytest.raises(AdmissibilityError) as exc:
        pb.solve(100.0)
    P1, P2 = exc.value.bracket
    assert P1 < P2


def test_solution_invariants(ref_background):
    bg = ref_background
    assert bg.L1 < bg.Lb < bg.L2
    sup, sub = bg.supersonic, bg.subsonic
    assert np.all(sup.u**2 > GAS.sound_speed_sq(sup.rho))
    assert np.all(sub.u**2 < GAS.sound_speed_sq(sub.rho))
    assert bg.pressure_jump() > 0
    rp, up, Pp, _ = bg.plus(bg.Lb)
    rm, um, Pm, _ = bg.minus(bg.Lb)
    assert abs(rp * up - rm * um) < 1e-10
    assert abs(rp * up**2 + Pp - rm * um**2 - Pm) < 1e-9
    assert sup.x[-1] == pytest.approx(bg.L2) and sup.x[0] == pytest.approx(bg.L1)
    assert sub.x[-1] == pytest.approx(bg.L2)


def test_shock_position_fourth_order_in_step():
    L = [problem(n).solve(5.89).Lb for n in (16, 32, 64)]
    assert abs(L[0] - L[1]) / abs(L[1] - L[2]) >= 8


def test_force_profiles():
    lin = ForceProfile.linear(0.5, 0.1)
    x = np.linspace(0, 2, 11)
    np.testing.assert_allclose(lin.g(x), 0.5 + 0.1 * x)
    h = 1e-5
    np.testing.assert_allclose((lin.Phi_b(x + h) - lin.Phi_b(x - h)) / (2 * h), lin.g(x), rtol=1e-8)
    assert lin.Phi_b(0.0) == 0.0
    tab = ForceProfile.tabulated(x, 0.5 + 0.1 * x)
    np.testing.assert_allclose(tab.g(x), lin.g(x), rtol=1e-12)
    with pytest.raises(ValueError):
        problem(force=ForceProfile.constant(-0.1))
