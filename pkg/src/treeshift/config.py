from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .tree_core import N_MAX_DEFAULT

DEFAULT_ALPHA_GRID = (0.0, 0.25, 0.5, 0.75, 0.9)
DEFAULT_N_RANGE = (5, 10)
MARGIN_TOL = 1e-9
ORACLE_TOL = 1e-8
TIE_TOL = 1e-10


class ConfigError(ValueError):
    pass


def parse_n_range(text: str) -> tuple[int, int]:
    """``"7"`` or ``"5..10"`` to an inclusive pair."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            a, b = int(lo), int(hi)
        else:
            a = b = int(text)
    except ValueError:
        raise ConfigError(f"bad n range {text!r}; use k or a..b") from None
    if a > b:
        raise ConfigError(f"empty n range {text!r}")
    return a, b


def parse_alpha_grid(text: str) -> tuple[float, ...]:
    try:
        grid = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise ConfigError(f"bad alpha list {text!r}") from None
    if not grid:
        raise ConfigError("alpha list is empty")
    return grid


@dataclass(frozen=True)
class RunConfig:
    n_range: tuple[int, int] = DEFAULT_N_RANGE
    alpha_grid: tuple[float, ...] = DEFAULT_ALPHA_GRID
    tol: float = MARGIN_TOL
    workers: int = 1
    output_path: Path | None = None
    output_format: str = "json"
    n_max: int = field(default=N_MAX_DEFAULT, repr=False)

    def __post_init__(self) -> None:
        lo, hi = self.n_range
        if not 4 <= lo <= hi <= self.n_max:
            raise ConfigError(f"n range must lie within [4, {self.n_max}], got {lo}..{hi}")
        for a in self.alpha_grid:
            if not 0.0 <= a < 1.0:
                raise ConfigError(f"alpha must lie in [0, 1), got {a}")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.output_format not in ("json", "csv"):
            raise ConfigError(f"unknown output format {self.output_format!r}")

    @property
    def orders(self) -> range:
        return range(self.n_range[0], self.n_range[1] + 1)
