"""End-to-end runs: background, supersonic march, subsonic fixed point, verification."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .background1d import BackgroundSolution
from .config import RunConfig
from .fields import PhysicalFields
from .subsonic import (FixedPointReport, Iterate, SolverInputs, assemble_physical_solution, fixed_point,
                       prepare_inputs)
from .upstream import PerturbationData, UpstreamField, march_supersonic
from .verify import ResidualReport, verify_all

log = logging.getLogger(__name__)


@dataclass
class Run2D:
    config: RunConfig
    background: BackgroundSolution
    data: PerturbationData
    upstream: UpstreamField
    inputs: SolverInputs
    iterate: Iterate
    report: FixedPointReport
    fields: PhysicalFields
    verification: ResidualReport

    def deviations(self) -> dict:
        """Max deviation of the downstream iterate from the background, per unknown."""
        it = self.iterate
        out = {name: float(np.max(np.abs(w))) for name, w in zip(("w1", "w2", "w3", "w4"), it.fields())}
        out["w5"] = float(np.max(np.abs(it.w5)))
        out["upstream"] = float(self.upstream.max_deviation(self.background))
        return out

    def summary(self) -> dict:
        it = self.iterate
        return {
            "sigma": self.data.sigma, "Lb": self.background.Lb, "Lambda": it.Lambda,
            "grid": [self.inputs.grid.n1, self.inputs.grid.n2],
            "march_grid": list(self.config.march_grid),
            "iterations": self.report.iterations, "contraction": self.report.contraction,
            "elliptic_residual": self.report.elliptic_residual,
            "shock_displacement": self.fields.shock_displacement,
            "deviations": self.deviations(),
        }


def solve_background(cfg: RunConfig) -> BackgroundSolution:
    return cfg.background_problem().solve(cfg.exit_pressure)


def run_2d(cfg: RunConfig, background: BackgroundSolution | None = None) -> Run2D:
    """Full perturbed solve for one configuration."""
    bg = background or solve_background(cfg)
    data = cfg.perturbation_data()
    nx, nr = cfg.march_grid
    log.info("marching the supersonic field on %dx%d", nx, nr)
    up = march_supersonic(data, bg, nx=nx, nr=nr)
    inputs = prepare_inputs(bg, data, up, cfg.n1, cfg.n2)
    log.info("fixed point on %dx%d with the %s backend", cfg.n1, cfg.n2, cfg.backend)
    it, rep = fixed_point(inputs, backend=cfg.backend, tol=cfg.tol, max_iter=cfg.max_iter,
                          relaxation=cfg.relaxation, n_modes=cfg.n_modes)
    fields = assemble_physical_solution(it, inputs)
    return Run2D(cfg, bg, data, up, inputs, it, rep, fields, verify_all(fields))
