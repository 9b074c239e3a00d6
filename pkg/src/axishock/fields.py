"""Physical flow fields on structured blocks, as consumed by the verifier."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gas import GasLaw

BLOCK_FIELDS = ("x", "r", "rho", "u_x", "u_r", "u_theta", "P", "dPhi_dx", "dPhi_dr")


@dataclass
class FieldBlock:
    """Arrays indexed [i, j]: i runs along the nozzle, j from the axis (j = 0) to the wall."""

    name: str
    x: np.ndarray
    r: np.ndarray
    rho: np.ndarray
    u_x: np.ndarray
    u_r: np.ndarray
    u_theta: np.ndarray
    P: np.ndarray
    dPhi_dx: np.ndarray
    dPhi_dr: np.ndarray

    @property
    def shape(self):
        return self.x.shape

    def table(self) -> dict:
        return {k: np.asarray(getattr(self, k)).ravel() for k in BLOCK_FIELDS}

    @classmethod
    def from_table(cls, name: str, table: dict, shape) -> "FieldBlock":
        return cls(name, **{k: np.asarray(table[k], dtype=float).reshape(shape) for k in BLOCK_FIELDS})


@dataclass
class PhysicalFields:
    gas: GasLaw
    sigma: float
    L1: float
    L2: float
    Lb: float
    upstream: FieldBlock
    downstream: FieldBlock
    shock_r: np.ndarray
    shock_x: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def shock_displacement(self) -> float:
        return float(np.max(np.abs(self.shock_x - self.Lb)))
