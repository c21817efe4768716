"""Settings management for Induced Forest Bounds."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

from platformdirs import user_config_dir

from induced_forest.core.errors import InvalidArgumentError

logger = logging.getLogger(__name__)


class IntegrationMethod(str, Enum):
    """Embedded Runge-Kutta pairs accepted by the ODE integrator."""
    RK45 = "RK45"
    DOP853 = "DOP853"


class OutputFormat(str, Enum):
    """Output formats of the command line interface."""
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


@dataclass(frozen=True)
class OdeOptions:
    """Tolerances and limits for one ODE integration."""
    method: IntegrationMethod = IntegrationMethod.RK45
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    tail_tol: float = 1e-9
    x_max_cap: float = 500.0

    def halved(self) -> OdeOptions:
        """Return the same options with both step tolerances halved."""
        return OdeOptions(
            method=self.method,
            rel_tol=self.rel_tol / 2,
            abs_tol=self.abs_tol / 2,
            tail_tol=self.tail_tol,
            x_max_cap=self.x_max_cap,
        )

    def loosened(self, factor: float) -> OdeOptions:
        """Return options with step tolerances multiplied by ``factor``."""
        return OdeOptions(
            method=self.method,
            rel_tol=self.rel_tol * factor,
            abs_tol=self.abs_tol * factor,
            tail_tol=self.tail_tol,
            x_max_cap=self.x_max_cap,
        )


@dataclass(frozen=True)
class SearchOptions:
    """Parameters of the two-stage search over p0."""
    grid_start: float = 0.005
    grid_stop: float = 0.600
    grid_step: float = 0.005
    grid_tol_factor: float = 1000.0
    golden_tol: float = 1e-5
    subcritical_margin: float = 1e-6
    ode: OdeOptions = field(default_factory=OdeOptions)

    def grid(self) -> list[float]:
        """Return the coarse p0 grid, endpoints included."""
        count = int(round((self.grid_stop - self.grid_start) / self.grid_step)) + 1
        return [round(self.grid_start + k * self.grid_step, 12) for k in range(count)]

    @property
    def p0_floor(self) -> float:
        """Smallest p0 the refinement may evaluate."""
        return self.grid_step / 10

    @property
    def p0_ceiling(self) -> float:
        """Largest p0 the refinement may evaluate."""
        return 1 - self.grid_step / 10


@dataclass
class Settings:
    """Application settings."""

    # Integration settings
    ode_method: IntegrationMethod = IntegrationMethod.RK45
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    tail_tol: float = 1e-9
    x_max_cap: float = 500.0

    # Search settings
    grid_start: float = 0.005
    grid_stop: float = 0.600
    grid_step: float = 0.005
    grid_tol_factor: float = 1000.0
    golden_tol: float = 1e-5
    subcritical_margin: float = 1e-6

    # Oracle settings
    enumeration_budget: int = 2**30
    mc_samples: int = 1_000_000

    # Output settings
    output_format: OutputFormat = OutputFormat.TEXT
    precision: int = 6
    log_level: str = "WARNING"

    _config_path: Path = field(default=None, repr=False, compare=False)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        """Initialize config path."""
        if self._config_path is None:
            config_dir = Path(user_config_dir("induced-forest-bounds", "OpenAEC"))
            self._config_path = config_dir / "settings.json"

    @classmethod
    def load(cls, config_path: Path | None = None) -> Settings:
        """Load settings from JSON file.

        A value of the wrong type is skipped with a warning. Ranges are
        checked by :meth:`validate`.
        """
        settings = cls(_config_path=config_path)  # type: ignore[arg-type]
        path = settings._config_path

        if not path.exists():
            return settings
        try:
            with open(path, encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, ValueError) as e:
            logger.warning("Could not load settings from %s: %s", path, e)
            return settings
        if not isinstance(data, dict):
            logger.warning("Could not load settings from %s: not a JSON object", path)
            return settings

        for key, value in data.items():
            if key.startswith("_") or not hasattr(settings, key):
                continue
            try:
                setattr(settings, key, _coerce(key, value, getattr(settings, key)))
            except (TypeError, ValueError) as e:
                logger.warning("Ignoring setting %s from %s: %s", key, path, e)
        return settings

    def validate(self) -> None:
        """Raise InvalidArgumentError when a value is out of range."""
        for name in _POSITIVE:
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidArgumentError(f"setting {name} must be positive, got {value!r}")
        if not 0 < self.grid_start < self.grid_stop < 1:
            raise InvalidArgumentError(
                f"need 0 < grid_start < grid_stop < 1, got {self.grid_start}, {self.grid_stop}"
            )
        if not 0 <= self.subcritical_margin < 1:
            raise InvalidArgumentError(
                f"subcritical_margin must lie in [0, 1), got {self.subcritical_margin!r}"
            )
        if self.log_level not in logging.getLevelNamesMapping():
            raise InvalidArgumentError(f"unknown log level {self.log_level!r}")

    def save(self) -> None:
        """Save settings to JSON file."""
        self._config_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self._config_path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2, ensure_ascii=False)

    @property
    def config_path(self) -> Path:
        """Path of the backing JSON file."""
        return self._config_path

    def ode_options(self) -> OdeOptions:
        """Build integrator options from the current settings."""
        return OdeOptions(
            method=self.ode_method,
            rel_tol=self.rel_tol,
            abs_tol=self.abs_tol,
            tail_tol=self.tail_tol,
            x_max_cap=self.x_max_cap,
        )

    def search_options(self) -> SearchOptions:
        """Build p0 search options from the current settings."""
        return SearchOptions(
            grid_start=self.grid_start,
            grid_stop=self.grid_stop,
            grid_step=self.grid_step,
            grid_tol_factor=self.grid_tol_factor,
            golden_tol=self.golden_tol,
            subcritical_margin=self.subcritical_margin,
            ode=self.ode_options(),
        )

    def to_dict(self) -> dict[str, Any]:
        """Convert settings to dictionary."""
        result = {}
        for key, value in asdict(self).items():
            if key.startswith("_"):
                continue
            if isinstance(value, Enum):
                result[key] = value.value
            else:
                result[key] = value
        return result


_POSITIVE = (
    "rel_tol",
    "abs_tol",
    "tail_tol",
    "x_max_cap",
    "grid_step",
    "grid_tol_factor",
    "golden_tol",
    "enumeration_budget",
    "mc_samples",
    "precision",
)


def _coerce(key: str, value: Any, default: Any) -> Any:
    """Convert a JSON value to the type of the field's default."""
    if isinstance(default, Enum):
        return type(default)(value)
    if isinstance(value, bool):
        raise TypeError(f"{key} must not be a boolean")
    if isinstance(default, int):
        if not isinstance(value, int):
            raise TypeError(f"{key} must be an integer, got {type(value).__name__}")
        return value
    if isinstance(default, float):
        if not isinstance(value, (int, float)):
            raise TypeError(f"{key} must be a number, got {type(value).__name__}")
        return float(value)
    if not isinstance(value, str):
        raise TypeError(f"{key} must be a string, got {type(value).__name__}")
    return value
