"""Exception hierarchy shared across the package."""

from __future__ import annotations

__all__ = [
    "RedpowError",
    "GraphError",
    "PowerError",
    "CycleSpaceError",
    "ModelError",
    "SolverError",
]


class RedpowError(Exception):
    """Base class for every error raised by this package."""


class GraphError(RedpowError):
    """Malformed graph input or an operation on an unsuitable graph."""


class PowerError(RedpowError):
    """Invalid reduced-power construction or query."""


class CycleSpaceError(RedpowError):
    """Invalid operation in the F2 edge space of a host graph."""


class ModelError(RedpowError):
    """Malformed rate specification or master-chain construction."""


class SolverError(RedpowError):
    """Steady-state solve failed or exceeded its tolerance."""
