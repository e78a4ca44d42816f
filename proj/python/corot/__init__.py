"""Constrained evolution and null-cone diagnostics for self-gravitating
corotational wave maps in 2+1 dimensions."""

from ._core import (
    ConfigError,
    DeficitAngleExceeded,
    History,
    RunResult,
    Target,
    cone_table,
    energy_table,
    evolve,
    make_target,
    momentum_residual,
)

__all__ = [
    "ConfigError",
    "DeficitAngleExceeded",
    "History",
    "RunResult",
    "Target",
    "cone_table",
    "energy_table",
    "evolve",
    "make_target",
    "momentum_residual",
]
