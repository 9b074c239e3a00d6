import json

import numpy as np
import pytest

from axishock.fields import FieldBlock, PhysicalFields
from axishock.gas import GasLaw
from axishock.verify import (EULER_KEYS, ResidualReport, axis_conditions, check_thresholds, compatibility_check,
                             entropy_check, euler_equation_residuals, euler_residual, rh_residual,
                             structural_claims, through_origin_fit, verify_all)


def _block(name, x, nr, state, g):
    X, R = np.meshgrid(x, np.linspace(0.0, 1.0, nr + 1), indexing="ij")
    rho, u, P, _ = state(X)
    z = np.zeros_like(X)
    return FieldBlock(name, X, R, rho, u, z, z.copy(), P, g(X), z.copy())


def background_fields(bg, n):
    """The exact 1-D transonic solution laid out on 2-D blocks."""
    up = _block("upstream", np.linspace(bg.L1, bg.L2, 2 * n + 1), n, bg.minus, bg.force.g)
    dn = _block("downstream", np.linspace(bg.Lb, bg.L2, n + 1), n, bg.plus, bg.force.g)
    return PhysicalFields(bg.gas, 0.0, bg.L1, bg.L2, bg.Lb, up, dn, dn.r[0].copy(), dn.x[0].copy())


def rigid_rotation(n, gas=GasLaw(1.4), U=2.0, omega=0.4, B=6.0):
    """Uniform axial flow with u_theta = omega r; enthalpy h(rho) = B + omega^2 r^2 / 2."""
    X, R = np.meshgrid(np.linspace(0.0, 1.0, n + 1), np.linspace(0.0, 1.0, n + 1), indexing="ij")
    k = gas.gamma / (gas.gamma - 1.0)
    rho = ((B + 0.5 * omega**2 * R**2) / k) ** (1.0 / (gas.gamma - 1.0))
    z = np.zeros_like(X)
    return FieldBlock("downstream", X, R, rho, U + z, z.copy(), omega * R, gas.pressure(rho), z.copy(), z.copy())


@pytest.fixture(scope="module")
def bg_levels(ref_background):
    return [background_fields(ref_background, n) for n in (16, 32, 64)]


def test_background_euler_residual_second_order(bg_levels):
    reps = [euler_residual(f) for f in bg_levels]
    for a, b in zip(reps, reps[1:]):
        assert a.values["euler_mom_x"] / b.values["euler_mom_x"] == pytest.approx(4.0, rel=0.1)
    for key in ("euler_mass", "euler_mom_r", "euler_swirl"):
        assert reps[-1].values[key] < 1e-13
    assert reps[-1].values["euler_mom_x"] <= reps[-1].h ** 2


def test_rigid_rotation_residual_second_order():
    errs = []
    for n in (16, 32, 64):
        res = euler_equation_residuals(rigid_rotation(n))
        errs.append(max(np.max(np.abs(v[1:-1, 1:-1])) for v in res.values()))
        assert np.max(np.abs(res["euler_swirl"][1:-1, 1:-1])) < 1e-13
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.1)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.1)


def test_rh_for_background(bg_levels):
    reps = [rh_residual(f) for f in bg_levels]
    for k in ("rh_1", "rh_2"):
        assert reps[0].values[k] / reps[1].values[k] == pytest.approx(4.0, rel=0.1)
        assert reps[-1].values[k] < 1e-8
    assert reps[-1].values["rh_3"] == 0 and reps[-1].values["rh_4"] == 0


def test_background_compatibility_exact(bg_levels):
    rep = compatibility_check(bg_levels[-1])
    assert len(rep.values) == 12
    assert max(rep.values.values()) < 1e-12


def test_rigid_rotation_axis_conditions():
    out = axis_conditions(rigid_rotation(32))
    assert np.max(np.abs(out["u_theta"])) == 0 and np.max(np.abs(out["dr_P"])) < (1 / 32) ** 2
    assert np.max(np.abs(out["dr_u_theta"] - 0.4)) < 1e-12


def test_corrupted_field_residual_is_linear(ref_background):
    peaks = []
    for eps in (1e-4, 2e-4, 4e-4):
        f = background_fields(ref_background, 32)
        f.downstream.P[16, 16] *= 1.0 + eps
        peaks.append(euler_residual(f).values["euler_mom_x_downstream"])
    base = euler_residual(background_fields(ref_background, 32)).values["euler_mom_x_downstream"]
    d = np.array(peaks) - base
    assert d[1] / d[0] == pytest.approx(2.0, rel=0.05)
    assert d[2] / d[1] == pytest.approx(2.0, rel=0.05)


def test_entropy_sign(ref_background):
    f = background_fields(ref_background, 32)
    assert entropy_check(f) == pytest.approx(ref_background.pressure_jump(), rel=1e-6)
    f.downstream.P[:] = 0.5 * f.upstream.P.min()
    assert entropy_check(f) < 0


def test_verify_all_keys_and_json(bg_levels):
    rep = verify_all(bg_levels[0])
    for k in EULER_KEYS:
        assert k in rep.values and k + "_full" in rep.values
    for k in ("rh_1", "rh_4", "entropy_min", "shock_displacement", "compat_dr2_u_r_downstream"):
        assert k in rep.values
    back = json.loads(rep.to_json())
    assert back["values"] == pytest.approx(rep.values)
    assert rep.flat()["h"] == rep.h


def test_check_thresholds():
    rep = ResidualReport({"euler_mass": 1e-3, "entropy_min": 0.5, "rh_1": float("nan")})
    assert check_thresholds(rep, {"euler_mass": 1e-2, "entropy_min": 0.0}) == []
    assert check_thresholds(rep, {"euler_mass": 1e-4}) == ["euler_mass"]
    assert check_thresholds(rep, {"entropy_min": 1.0}) == ["entropy_min"]
    assert check_thresholds(rep, {"rh_1": 1.0}) == ["rh_1"]
    assert check_thresholds(rep, {"rh_2": 1.0}) == ["rh_2 (missing)"]


def test_through_origin_fit():
    x = np.array([1.0, 2.0, 3.0])
    assert through_origin_fit(x, 2 * x) == (pytest.approx(2.0), pytest.approx(1.0))
    y = np.array([1.0, 2.5, 2.5])
    a, r2 = through_origin_fit(x, y)
    assert a == pytest.approx((1 + 5 + 7.5) / 14)
    ss_res = np.sum((y - a * x) ** 2)
    assert r2 == pytest.approx(1 - ss_res / np.sum((y - y.mean()) ** 2))


def test_structural_claims():
    out = structural_claims(pressures=[5.0, 6.0, 5.5], shock_positions=[1.6, 0.8, 1.2],
                            sigmas=[0.0, 1e-3, 2e-3], deviations=[0.0, 1e-3, 2e-3],
                            shock_displacements=[0.0, 2e-3, 4.2e-3])
    assert out["monotone_decreasing"]
    assert out["deviation_r2"] == pytest.approx(1.0)
    assert out["shock_constants"] == pytest.approx([2.0, 2.1])
    assert out["shock_constant_spread"] == pytest.approx(0.1 / 2.05)
    assert not structural_claims(pressures=[5.0, 6.0], shock_positions=[1.0, 1.1])["monotone_decreasing"]
    with pytest.raises(ValueError):
        structural_claims(pressures=[5.0], shock_positions=[1.0])
