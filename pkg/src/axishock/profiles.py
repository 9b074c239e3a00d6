"""Small smooth-function containers used for perturbation data.

Every 1-D profile exposes ``value``, ``deriv`` and ``deriv2``; the force
perturbation exposes its value and gradient in (x, r).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial
from scipy.interpolate import CubicSpline


class Profile1D:
    name = "profile"

    def value(self, t):
        raise NotImplementedError

    def deriv(self, t):
        raise NotImplementedError

    def deriv2(self, t):
        raise NotImplementedError

    def __call__(self, t):
        return self.value(t)

    def spec(self) -> dict:
        return {"kind": self.name}


class Zero(Profile1D):
    name = "zero"

    def value(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))

    deriv = value
    deriv2 = value


@dataclass
class PolynomialProfile(Profile1D):
    """amplitude * p((t - origin)/scale) for a power-basis polynomial p."""

    coeffs: list
    amplitude: float = 1.0
    origin: float = 0.0
    scale: float = 1.0
    name: str = "polynomial"

    def __post_init__(self):
        self._p = Polynomial(self.coeffs)
        self._dp = self._p.deriv()
        self._ddp = self._dp.deriv()

    def _s(self, t):
        return (np.asarray(t, dtype=float) - self.origin) / self.scale

    def value(self, t):
        return self.amplitude * self._p(self._s(t))

    def deriv(self, t):
        return self.amplitude * self._dp(self._s(t)) / self.scale

    def deriv2(self, t):
        return self.amplitude * self._ddp(self._s(t)) / self.scale**2

    def spec(self):
        return {"kind": self.name, "coeffs": list(self.coeffs), "amplitude": self.amplitude,
                "origin": self.origin, "scale": self.scale}


@dataclass
class CosineProfile(Profile1D):
    """amplitude * cos(k*pi*t); even in t with vanishing slope at t = 0 and t = 1/k."""

    amplitude: float = 1.0
    k: float = 1.0
    name: str = "cosine"

    def value(self, t):
        return self.amplitude * np.cos(self.k * np.pi * np.asarray(t, dtype=float))

    def deriv(self, t):
        w = self.k * np.pi
        return -self.amplitude * w * np.sin(w * np.asarray(t, dtype=float))

    def deriv2(self, t):
        w = self.k * np.pi
        return -self.amplitude * w * w * np.cos(w * np.asarray(t, dtype=float))

    def spec(self):
        return {"kind": self.name, "amplitude": self.amplitude, "k": self.k}


@dataclass
class TabulatedProfile(Profile1D):
    t: list
    v: list
    name: str = "tabulated"

    def __post_init__(self):
        self._s = CubicSpline(np.asarray(self.t, float), np.asarray(self.v, float))

    def value(self, t):
        return self._s(t)

    def deriv(self, t):
        return self._s(t, 1)

    def deriv2(self, t):
        return self._s(t, 2)

    def spec(self):
        return {"kind": self.name, "t": list(self.t), "v": list(self.v)}


class ForcePerturbation:
    """Phi_e(x, r) with its gradient."""

    name = "force"

    def value(self, x, r):
        raise NotImplementedError

    def grad(self, x, r):
        raise NotImplementedError

    def spec(self) -> dict:
        return {"kind": self.name}


class ZeroForce(ForcePerturbation):
    name = "zero"

    def value(self, x, r):
        return np.zeros(np.broadcast(np.asarray(x), np.asarray(r)).shape)

    def grad(self, x, r):
        z = self.value(x, r)
        return z, z.copy()


@dataclass
class SeparableCosineForce(ForcePerturbation):
    """amplitude * s(x) * cos(pi r) with s = (x - L1)/(L2 - L1).

    Even in r, so the radial force vanishes on the axis, and also at r = 1.
    """

    amplitude: float = 1.0
    L1: float = 0.0
    L2: float = 2.0
    name: str = "separable_cosine"

    def value(self, x, r):
        s = (np.asarray(x, dtype=float) - self.L1) / (self.L2 - self.L1)
        return self.amplitude * s * np.cos(np.pi * np.asarray(r, dtype=float))

    def grad(self, x, r):
        s = (np.asarray(x, dtype=float) - self.L1) / (self.L2 - self.L1)
        r = np.asarray(r, dtype=float)
        dx = self.amplitude * np.cos(np.pi * r) / (self.L2 - self.L1) + 0 * s
        dr = -self.amplitude * np.pi * s * np.sin(np.pi * r)
        return dx, dr

    def spec(self):
        return {"kind": self.name, "amplitude": self.amplitude, "L1": self.L1, "L2": self.L2}


PROFILE_KINDS = {"zero": Zero, "polynomial": PolynomialProfile, "cosine": CosineProfile,
                 "tabulated": TabulatedProfile}
FORCE_KINDS = {"zero": ZeroForce, "separable_cosine": SeparableCosineForce}


def profile_from_spec(spec: dict | None) -> Profile1D:
    if spec is None:
        return Zero()
    spec = dict(spec)
    kind = spec.pop("kind")
    return PROFILE_KINDS[kind](**spec) if kind != "zero" else Zero()


def force_from_spec(spec: dict | None) -> ForcePerturbation:
    if spec is None:
        return ZeroForce()
    spec = dict(spec)
    kind = spec.pop("kind")
    return FORCE_KINDS[kind](**spec) if kind != "zero" else ZeroForce()
