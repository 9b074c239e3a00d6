"""Exception hierarchy shared by the library and the command line front end."""
from __future__ import annotations


class AxishockError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class GasDomainError(AxishockError, ValueError):
    """Non-positive density or a cavitating Bernoulli argument."""


class OutOfDomain(AxishockError, ValueError):
    """Query outside the sampled region."""


class SonicDegeneracy(AxishockError):
    """A 1-D branch came too close to the sonic point."""


class JumpFailure(AxishockError):
    """No subsonic root of the 1-D jump relation could be bracketed."""


class AdmissibilityError(AxishockError):
    """Exit pressure outside the computed admissible bracket."""

    exit_code = 2

    def __init__(self, message: str, bracket: tuple[float, float] | None = None):
        super().__init__(message)
        self.bracket = bracket


class MarchingError(AxishockError):
    """Loss of hyperbolicity or a step-size violation while marching."""


class TransformError(AxishockError):
    """Mass-coordinate transform failed (non-positive axial mass flux)."""


class MapError(AxishockError):
    """Degenerate fixed-domain map."""


class GeometryError(AxishockError):
    """The shock left the nozzle section."""


class SolverError(AxishockError):
    """Linear solve failure."""


class ModeFailure(SolverError):
    """Degenerate scalar closure in the Bessel-mode solver."""

    def __init__(self, message: str, mode: int):
        super().__init__(message)
        self.mode = mode


class StageError(AxishockError):
    """A stage of the iteration map failed; ``stage`` names it."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


class DivergenceError(AxishockError):
    """Fixed-point iteration failed to converge."""

    exit_code = 3

    def __init__(self, message: str, history: list[float] | None = None):
        super().__init__(message)
        self.history = history or []


class VerificationFailure(AxishockError):
    exit_code = 4


class ConfigError(AxishockError):
    exit_code = 5
