from decimal import Decimal, getcontext

import numpy as np
import pytest

from axishock.errors import GasDomainError
from axishock.gas import FlowState, GasLaw


def test_pressure_exact_values():
    assert GasLaw(1.4).pressure(1.0) == 1.0
    assert GasLaw(2.0).pressure(0.5) == 0.25


def test_pressure_against_extended_precision():
    getcontext().prec = 40
    exact = (Decimal("1.4") * Decimal("1.7").ln()).exp()
    assert GasLaw(1.4).pressure(1.7) == pytest.approx(float(exact), rel=1e-15)


@pytest.mark.parametrize("rho", [0.0, -1.0])
def test_nonpositive_density_rejected(rho):
    with pytest.raises(GasDomainError):
        GasLaw().pressure(rho)
    with pytest.raises(GasDomainError):
        GasLaw().sound_speed_sq(rho)


def test_gamma_must_exceed_one():
    with pytest.raises(ValueError):
        GasLaw(1.0)


def test_sound_speed_values():
    assert GasLaw(1.4).sound_speed_sq(1.0) == pytest.approx(1.4, rel=1e-15)
    assert GasLaw(2.0).sound_speed_sq(1.0) == 2.0


def test_sound_speed_is_pressure_derivative():
    gas = GasLaw(1.4)
    rho = np.logspace(-2, 2, 100)
    eps = 1e-6 * rho
    fd = (gas.pressure(rho + eps) - gas.pressure(rho - eps)) / (2 * eps)
    np.testing.assert_allclose(gas.sound_speed_sq(rho), fd, rtol=1e-6)
    rho2 = 2.0
    e = 1e-5
    fd2 = (gas.pressure(rho2 + e) - gas.pressure(rho2 - e)) / (2 * e)
    assert gas.sound_speed_sq(rho2) == pytest.approx(fd2, rel=1e-8)


def test_monotone_in_density():
    gas = GasLaw(1.4)
    rho = np.linspace(0.01, 10, 500)
    assert np.all(np.diff(gas.pressure(rho)) > 0)
    assert np.all(np.diff(gas.sound_speed_sq(rho)) > 0)


def test_bernoulli_unit_state():
    gas = GasLaw(1.4)
    s = FlowState(1.0, 0.0, 0.0, 0.0, 1.0)
    assert gas.bernoulli(s, 0.0) == pytest.approx(3.5, rel=1e-15)
    assert gas.bernoulli(s, 0.7) == pytest.approx(3.5 - 0.7, rel=1e-15)


def test_density_from_bernoulli_inverse():
    gas = GasLaw(1.4)
    assert gas.density_from_bernoulli(3.5, 0.0, 0.0) == pytest.approx(1.0, rel=1e-14)
    rng = np.random.default_rng(3)
    for _ in range(200):
        rho = rng.uniform(0.1, 5.0)
        u = rng.normal(size=3)
        Phi = rng.uniform(-1, 1)
        s = gas.state(rho, *u)
        B = gas.bernoulli(s, Phi)
        assert gas.density_from_bernoulli(B, Phi, s.speed_sq) == pytest.approx(rho, rel=1e-12)


def test_cavitation_is_an_error():
    with pytest.raises(GasDomainError):
        GasLaw(1.4).density_from_bernoulli(1.0, 0.0, 2.0)


def test_flow_state_invariants():
    s = GasLaw(1.4).state(1.3, 0.2)
    assert s.P == pytest.approx(1.3**1.4, rel=1e-15)
    with pytest.raises(GasDomainError):
        FlowState(-1.0, 0.0, 0.0, 0.0, 1.0)


def test_background_bernoulli_constant(ref_background):
    bg = ref_background
    sup = bg.supersonic.bernoulli(bg.supersonic.x)
    x = bg.subsonic.x[bg.subsonic.x >= bg.Lb]
    sub = bg.subsonic.bernoulli(x)
    assert np.ptp(sup) < 1e-12 * abs(sup[0])
    assert np.ptp(sub) < 1e-12 * abs(sub[0])
