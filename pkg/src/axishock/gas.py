"""Isentropic polytropic gas, P = rho**gamma.

All functions accept scalars or numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GasDomainError


def _check_positive(rho, what="density"):
    if np.any(~(np.asarray(rho) > 0)):
        raise GasDomainError(f"{what} must be positive")


@dataclass(frozen=True)
class GasLaw:
    gamma: float = 1.4
    pressure_constant: float = 1.0  # kept at 1 throughout

    def __post_init__(self):
        if not self.gamma > 1:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")
        if self.pressure_constant != 1.0:
            raise ValueError("only the normalised law P = rho**gamma is supported")

    def pressure(self, rho):
        _check_positive(rho)
        return np.power(rho, self.gamma)

    def density_of_pressure(self, P):
        _check_positive(P, "pressure")
        return np.power(P, 1.0 / self.gamma)

    def sound_speed_sq(self, rho):
        _check_positive(rho)
        return self.gamma * np.power(rho, self.gamma - 1.0)

    def enthalpy(self, rho):
        """gamma*P/((gamma-1)*rho), the enthalpy per unit mass."""
        _check_positive(rho)
        return self.gamma / (self.gamma - 1.0) * np.power(rho, self.gamma - 1.0)

    def mach_sq(self, rho, speed_sq):
        return speed_sq / self.sound_speed_sq(rho)

    def bernoulli(self, state: "FlowState", Phi=0.0):
        """|u|^2/2 + gamma P/((gamma-1) rho) - Phi."""
        q2 = state.u_x**2 + state.u_r**2 + state.u_theta**2
        return 0.5 * q2 + self.gamma * state.P / ((self.gamma - 1.0) * state.rho) - Phi

    def density_from_bernoulli(self, B, Phi, speed_sq):
        """Invert the Bernoulli relation for the density.

        Raises
        ------
        GasDomainError
            If ``B + Phi - speed_sq/2`` is not positive (cavitation).
        """
        arg = np.asarray(B + Phi - 0.5 * speed_sq, dtype=float)
        if np.any(~(arg > 0)):
            raise GasDomainError("cavitation: non-positive Bernoulli argument")
        g = self.gamma
        return np.power((g - 1.0) / g * arg, 1.0 / (g - 1.0))

    def state(self, rho, u_x, u_r=0.0, u_theta=0.0) -> "FlowState":
        return FlowState(rho, u_x, u_r, u_theta, self.pressure(rho))


@dataclass(frozen=True)
class FlowState:
    rho: float | np.ndarray
    u_x: float | np.ndarray
    u_r: float | np.ndarray
    u_theta: float | np.ndarray
    P: float | np.ndarray

    def __post_init__(self):
        _check_positive(self.rho)
        _check_positive(self.P, "pressure")

    @property
    def speed_sq(self):
        return self.u_x**2 + self.u_r**2 + self.u_theta**2
