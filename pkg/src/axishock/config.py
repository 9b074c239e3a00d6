"""Run configuration: a TOML file with named sections.

Example::

    [gas]
    gamma = 1.4

    [geometry]
    L1 = 0.0
    L2 = 2.0

    [force]            # constant | linear | tabulated (inline x/g or csv = "path")
    kind = "constant"
    g0 = 0.5

    [background]
    inlet_rho = 1.0
    inlet_u = 2.0
    exit_pressure = 5.89

    [perturbation]     # preset = "default" | "none", components override the preset
    preset = "default"
    sigma = 0.005

    [grid]
    n1 = 128
    n2 = 64

    [solver]
    tol = 1e-10
    backend = "fd"

Every section is optional; missing keys take the defaults below.
"""
from __future__ import annotations

import copy
import csv
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .background1d import BackgroundProblem, ForceProfile, State1D
from .errors import ConfigError
from .gas import GasLaw
from .profiles import force_from_spec, profile_from_spec
from .upstream import InletPerturbation, PerturbationData, default_perturbation

BACKENDS = ("fd", "modes")
MIN_GRID = 16


@dataclass
class RunConfig:
    gamma: float = 1.4
    L1: float = 0.0
    L2: float = 2.0
    force: dict = field(default_factory=lambda: {"kind": "constant", "g0": 0.5})
    inlet_rho: float = 1.0
    inlet_u: float = 2.0
    exit_pressure: float = 5.89
    n_steps: int = 2048
    perturbation: dict = field(default_factory=lambda: {"preset": "default", "sigma": 0.005})
    n1: int = 128
    n2: int = 64
    nx: int | None = None            # axial steps of the supersonic march, default 2*n1
    nr: int | None = None            # radial intervals of the march, default n2
    tol: float = 1e-10
    max_iter: int = 60
    relaxation: float = 1.0
    backend: str = "fd"
    n_modes: int = 32
    out: str = "run"
    h2_factor: float = 5.0           # residual keys must satisfy value <= h2_factor * h^2
    limits: dict = field(default_factory=dict)   # absolute per-key overrides
    pressures: list = field(default_factory=list)
    sweep_points: int = 5
    levels: list = field(default_factory=lambda: [[64, 32], [128, 64], [256, 128]])
    base_dir: str = "."              # directory that relative paths in the file refer to

    def __post_init__(self):
        self.validate()

    # ------------------------------------------------------------ validation
    def validate(self) -> None:
        problems = []
        if not self.gamma > 1:
            problems.append("gamma must exceed 1")
        if not self.L2 > self.L1:
            problems.append("need L1 < L2")
        for name in ("tol", "relaxation", "exit_pressure", "inlet_rho", "inlet_u", "h2_factor"):
            if not getattr(self, name) > 0:
                problems.append(f"{name} must be positive")
        for name in ("n1", "n2", "nx", "nr"):
            v = getattr(self, name)
            if v is not None and (int(v) != v or v < MIN_GRID):
                problems.append(f"grid size {name} must be an integer >= {MIN_GRID}")
        for lv in self.levels:
            if len(lv) != 2 or min(lv) < MIN_GRID:
                problems.append(f"study level {lv} must be two grid sizes >= {MIN_GRID}")
        if self.sigma < 0:
            problems.append("sigma must be non-negative")
        if self.backend not in BACKENDS:
            problems.append(f"backend must be one of {BACKENDS}")
        if self.max_iter < 1 or self.n_modes < 1 or self.n_steps < 16:
            problems.append("max_iter, n_modes and n_steps must be positive (n_steps >= 16)")
        if problems:
            raise ConfigError("; ".join(problems))

    @property
    def sigma(self) -> float:
        return float(self.perturbation.get("sigma", 0.0))

    @property
    def march_grid(self) -> tuple[int, int]:
        return (self.nx or 2 * self.n1, self.nr or self.n2)

    # ------------------------------------------------------------ overrides
    def replace(self, **changes) -> "RunConfig":
        data = copy.deepcopy(asdict(self))
        sigma = changes.pop("sigma", None)
        data.update({k: v for k, v in changes.items() if v is not None})
        if sigma is not None:
            data["perturbation"]["sigma"] = float(sigma)
        return RunConfig(**data)

    def to_dict(self) -> dict:
        return copy.deepcopy(asdict(self))

    # ------------------------------------------------------------ builders
    def gas_law(self) -> GasLaw:
        return GasLaw(self.gamma)

    def force_profile(self) -> ForceProfile:
        spec = dict(self.force)
        kind = spec.pop("kind", "constant")
        try:
            if kind == "constant":
                return ForceProfile.constant(float(spec["g0"]), self.L1)
            if kind == "linear":
                return ForceProfile.linear(float(spec["g0"]), float(spec["slope"]), self.L1)
            if kind == "tabulated":
                if "csv" in spec:
                    x, g = _read_two_columns(Path(self.base_dir) / spec["csv"])
                else:
                    x, g = spec["x"], spec["g"]
                return ForceProfile.tabulated(x, g, self.L1)
        except KeyError as exc:
            raise ConfigError(f"force section is missing {exc}") from exc
        raise ConfigError(f"unknown force kind {kind!r}")

    def background_problem(self) -> BackgroundProblem:
        try:
            return BackgroundProblem(self.gas_law(), self.force_profile(),
                                     State1D(self.inlet_rho, self.inlet_u),
                                     self.L1, self.L2, n_steps=self.n_steps)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def perturbation_data(self, sigma: float | None = None) -> PerturbationData:
        spec = dict(self.perturbation)
        s = self.sigma if sigma is None else float(sigma)
        preset = spec.pop("preset", "default")
        spec.pop("sigma", None)
        if preset == "default":
            data = default_perturbation(s, self.L1, self.L2)
        elif preset == "none":
            data = PerturbationData(s)
        else:
            raise ConfigError(f"unknown perturbation preset {preset!r}")
        try:
            wall = profile_from_spec(spec["wall"]) if "wall" in spec else data.wall
            force = force_from_spec(spec["force"]) if "force" in spec else data.force
            exit_p = profile_from_spec(spec["exit_pressure"]) if "exit_pressure" in spec else data.exit_pressure
            inlet = data.inlet
            if "inlet" in spec:
                parts = {k: profile_from_spec(v) for k, v in spec["inlet"].items()}
                inlet = InletPerturbation(**{k: parts.get(k, getattr(inlet, k)) for k in ("u", "v", "w", "P")})
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"bad perturbation component: {exc}") from exc
        return PerturbationData(s, wall, force, inlet, exit_p)

    def thresholds(self, h: float, keys) -> dict:
        """Upper bounds h2_factor*h^2 for residual keys, entropy_min > 0, explicit overrides."""
        out = {}
        for k in keys:
            if k == "entropy_min":
                out[k] = 0.0
            elif k.startswith(("euler_", "rh_", "compat_")) and not k.endswith("_full"):
                out[k] = self.h2_factor * h * h
        out.update(self.limits)
        return out


_SECTIONS = {
    "gas": {"gamma": "gamma"},
    "geometry": {"L1": "L1", "L2": "L2"},
    "background": {"inlet_rho": "inlet_rho", "inlet_u": "inlet_u", "exit_pressure": "exit_pressure",
                   "n_steps": "n_steps"},
    "grid": {"n1": "n1", "n2": "n2", "nx": "nx", "nr": "nr"},
    "solver": {"tol": "tol", "max_iter": "max_iter", "relaxation": "relaxation", "backend": "backend",
               "n_modes": "n_modes"},
    "output": {"dir": "out"},
    "verify": {"h2_factor": "h2_factor", "limits": "limits"},
    "sweep": {"pressures": "pressures", "points": "sweep_points"},
    "study": {"levels": "levels"},
}


def config_from_dict(doc: dict, base_dir: str = ".") -> RunConfig:
    kwargs = {"base_dir": str(base_dir)}
    unknown = set(doc) - set(_SECTIONS) - {"force", "perturbation"}
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    for section, keys in _SECTIONS.items():
        body = doc.get(section, {})
        extra = set(body) - set(keys)
        if extra:
            raise ConfigError(f"unknown keys in [{section}]: {sorted(extra)}")
        for key, attr in keys.items():
            if key in body:
                kwargs[attr] = body[key]
    if "force" in doc:
        kwargs["force"] = dict(doc["force"])
    if "perturbation" in doc:
        pert = {"preset": "default", "sigma": 0.0}
        pert.update(doc["perturbation"])
        kwargs["perturbation"] = pert
    try:
        return RunConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str | Path | None) -> RunConfig:
    """Read a TOML run configuration; ``None`` gives the reference defaults."""
    if path is None:
        return RunConfig()
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    return config_from_dict(doc, path.parent)


def _read_two_columns(path: Path):
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r]
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if rows and not _is_number(rows[0][0]):
        rows = rows[1:]
    x = [float(r[0]) for r in rows]
    g = [float(r[1]) for r in rows]
    return x, g


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True
