from __future__ import annotations

import numpy as np

from ..fields import FieldBlock, PhysicalFields
from .grid import Iterate
from .remainders import SolverInputs, downstream_state


def upstream_block(inputs: SolverInputs) -> FieldBlock:
    up, data, bg = inputs.upstream, inputs.data, inputs.background
    X = np.repeat(up.x[:, None], up.eta.size, axis=1)
    R = up.r
    fx, fr = data.force.grad(X, R)
    return FieldBlock("upstream", X, R, up.rho, up.u_x, up.u_r, up.u_theta, up.P,
                      bg.force.g(X) + data.sigma * fx, data.sigma * fr)


def assemble_physical_solution(it: Iterate, inputs: SolverInputs) -> PhysicalFields:
    """Map a converged iterate back to (x, r) and pair it with the upstream field."""
    st = downstream_state(it, inputs)
    down = FieldBlock("downstream", st["D0"], st["r"], st["rho"], st["u_x"], st["u_r"], st["u_theta"],
                      st["P"], st["dPhi_dx"], st["dPhi_dr"])
    bg = inputs.background
    return PhysicalFields(bg.gas, inputs.sigma, bg.L1, bg.L2, bg.Lb, upstream_block(inputs), down,
                          shock_r=st["r"][0].copy(), shock_x=st["D0"][0].copy(),
                          meta={"grid": [inputs.grid.n1, inputs.grid.n2], "M": inputs.grid.M,
                                "Lambda": it.Lambda})
