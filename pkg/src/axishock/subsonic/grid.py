from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..transform import shock_slope


@dataclass(frozen=True)
class Grid:
    """Uniform node grid on the fixed rectangle [Lb, L2] x [0, M]."""

    Lb: float
    L2: float
    M: float
    n1: int  # intervals in z1
    n2: int  # intervals in z2

    def __post_init__(self):
        if self.n1 < 4 or self.n2 < 4:
            raise ValueError("grid needs at least 4 intervals per direction")

    @property
    def z1(self) -> np.ndarray:
        return np.linspace(self.Lb, self.L2, self.n1 + 1)

    @property
    def z2(self) -> np.ndarray:
        return np.linspace(0.0, self.M, self.n2 + 1)

    @property
    def h1(self) -> float:
        return (self.L2 - self.Lb) / self.n1

    @property
    def h2(self) -> float:
        return self.M / self.n2

    @property
    def shape(self) -> tuple[int, int]:
        return self.n1 + 1, self.n2 + 1


@dataclass
class Iterate:
    """(w1, w2, w3, w4) on the rectangle and the shock displacement w5(z2)."""

    w1: np.ndarray
    w2: np.ndarray
    w3: np.ndarray
    w4: np.ndarray
    w5: np.ndarray
    Lambda: float = 0.0
    info: dict = field(default_factory=dict, repr=False)

    @classmethod
    def zeros(cls, grid: Grid) -> "Iterate":
        z = np.zeros(grid.shape)
        return cls(z, z.copy(), z.copy(), z.copy(), np.zeros(grid.n2 + 1))

    def fields(self):
        return self.w1, self.w2, self.w3, self.w4

    def __sub__(self, other: "Iterate") -> "Iterate":
        return Iterate(self.w1 - other.w1, self.w2 - other.w2, self.w3 - other.w3,
                       self.w4 - other.w4, self.w5 - other.w5, self.Lambda - other.Lambda)

    def scaled(self, a: float) -> "Iterate":
        return Iterate(a * self.w1, a * self.w2, a * self.w3, a * self.w4, a * self.w5, a * self.Lambda)

    def blend(self, other: "Iterate", theta: float) -> "Iterate":
        """(1 - theta) * self + theta * other."""
        mix = lambda a, b: (1.0 - theta) * a + theta * b
        return Iterate(mix(self.w1, other.w1), mix(self.w2, other.w2), mix(self.w3, other.w3),
                       mix(self.w4, other.w4), mix(self.w5, other.w5), mix(self.Lambda, other.Lambda))


def composite_norm(it: Iterate, grid: Grid) -> float:
    """Sum of max-norms of w1..w4, w5 and w5'."""
    parts = [np.max(np.abs(w)) for w in it.fields()]
    parts.append(np.max(np.abs(it.w5)))
    parts.append(np.max(np.abs(shock_slope(it.w5, grid.h2))))
    return float(sum(parts))
