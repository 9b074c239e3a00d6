import numpy as np
import pytest

from axishock.errors import DivergenceError
from axishock.pipeline import run_2d
from axishock.subsonic import (Iterate, apply_T, composite_norm, fixed_point, nonlinear_remainders,
                               prepare_inputs)
from axishock.upstream import default_perturbation, march_supersonic

REMAINDER_KEYS = ("F3", "F4", "R1", "R2", "R3", "R4", "h1")


def _probe(grid, eps, a=np.ones(5)):
    """Smooth iterate respecting the axis parities (w1, w4 even; w2, w3 odd)."""
    Z1, Z2 = np.meshgrid(grid.z1, grid.z2, indexing="ij")
    s, t = (Z1 - grid.Lb) / (grid.L2 - grid.Lb), Z2 / grid.M
    return Iterate(eps * a[0] * np.cos(np.pi * s) * (1 + t**2), eps * a[1] * t * (1 - t**2) * (1 + s),
                   eps * a[2] * t * (1 + s), eps * a[3] * (1 + t**2) + 0 * s,
                   eps * a[4] * 0.1 * (1 + (grid.z2 / grid.M) ** 2))


def test_zero_iterate_has_zero_remainders(zero_inputs):
    b = nonlinear_remainders(Iterate.zeros(zero_inputs.grid), zero_inputs)
    assert max(b.norms().values()) < 1e-12
    assert np.max(np.abs(b.q2)) < 1e-12 and np.max(np.abs(b.q3)) < 1e-12


def test_remainders_are_quadratic(zero_inputs):
    norms = [nonlinear_remainders(_probe(zero_inputs.grid, e), zero_inputs).norms()
             for e in (1e-2, 5e-3, 2.5e-3)]
    for k in REMAINDER_KEYS:
        for lo, hi in zip(norms, norms[1:]):
            assert lo[k] / hi[k] == pytest.approx(4.0, rel=0.1), k


def test_axis_remainders_vanish(zero_inputs):
    rng = np.random.default_rng(0)
    for _ in range(3):
        b = nonlinear_remainders(_probe(zero_inputs.grid, 1e-2, rng.uniform(0.5, 1.5, 5)), zero_inputs)
        assert np.all(b.G2[:, 0] == 0) and np.all(b.Gc2[:, 0] == 0)


def test_T_of_zero_at_zero_sigma(zero_inputs):
    out = apply_T(Iterate.zeros(zero_inputs.grid), zero_inputs)
    assert composite_norm(out, zero_inputs.grid) < 1e-12


def test_zero_sigma_converges_at_once(zero_inputs):
    it, rep = fixed_point(zero_inputs)
    assert rep.converged and rep.iterations == 1
    assert composite_norm(it, zero_inputs.grid) < 1e-12


def test_second_application_is_quadratic(ref_background):
    first, second = [], []
    for s in (1e-3, 2e-3, 4e-3):
        data = default_perturbation(s)
        inp = prepare_inputs(ref_background, data, march_supersonic(data, ref_background, 64, 32), 32, 32)
        T0 = apply_T(Iterate.zeros(inp.grid), inp)
        T1 = apply_T(T0, inp)
        first.append(composite_norm(T0, inp.grid))
        second.append(composite_norm(T1 - T0, inp.grid))
    for k in range(2):
        assert first[k + 1] / first[k] == pytest.approx(2.0, rel=0.05)
        assert second[k + 1] / second[k] == pytest.approx(4.0, rel=0.05)


def test_transport_structure(small_run):
    it, grid = small_run.iterate, small_run.inputs.grid
    rz = it.info["bundle"].state["r_over_z2"]
    scale = np.max(np.abs(it.w3))
    assert np.max(np.ptp(rz * it.w3, axis=0)) <= 1e-12 * scale
    assert np.max(np.abs(it.w3[:, 0])) <= 1e-12 * scale
    assert np.max(np.ptp(it.w4, axis=0)) <= 1e-12 * np.max(np.abs(it.w4))
    assert it.Lambda == pytest.approx(it.w5[-1] / small_run.inputs.coeffs.a1, rel=1e-14)


def test_shock_slope_vanishes_on_axis(ref_config, ref_background):
    slopes = []
    for n1, n2 in ((32, 16), (64, 32), (128, 64)):
        run = run_2d(ref_config.replace(n1=n1, n2=n2), ref_background)
        w5, h = run.iterate.w5, run.inputs.grid.h2
        slopes.append(abs(-3 * w5[0] + 4 * w5[1] - w5[2]) / (2 * h))
        assert slopes[-1] <= h * h
    assert slopes[0] / slopes[1] > 3 and slopes[1] / slopes[2] > 3


def test_divergence_carries_history(ref_config, ref_background):
    with pytest.raises(DivergenceError) as exc:
        run_2d(ref_config.replace(n1=32, n2=16, max_iter=2), ref_background)
    assert len(exc.value.history) == 2
    assert exc.value.exit_code == 3


def test_zero_sigma_assembles_background(zero_run, ref_background):
    f = zero_run.fields
    np.testing.assert_allclose(f.shock_x, ref_background.Lb, rtol=0, atol=1e-12)
    d = f.downstream
    rho, u, P, _ = ref_background.plus(d.x)
    assert np.max(np.abs(d.P - P)) < 1e-12
    assert np.max(np.abs(d.u_x - u)) < 1e-12
    assert np.max(np.abs(d.u_r)) < 1e-12 and np.max(np.abs(d.u_theta)) < 1e-12


def test_perturbed_run_report(small_run):
    rep = small_run.report
    assert rep.converged and 0 < rep.contraction < 0.5
    assert rep.elliptic_residual < 1e-10
    assert small_run.verification.values["entropy_min"] > 0
    assert set(rep.as_dict()) >= {"history", "ratios", "contraction", "iterations"}
