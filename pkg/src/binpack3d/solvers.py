"""Shared solver configuration and result types."""

from __future__ import annotations

from dataclasses import dataclass, field

from .geometry import Instance, Packing
from .metrics import BoundInconsistencyWarning, gap_vs_bound  # noqa: F401

DEFAULT_NEIGHBORHOOD = {"reinsert": 0.5, "swap": 0.3, "reorient": 0.2}

# Deterministic mode converts the time limit into an iteration budget at
# this fixed rate, so identical configs replay identically on any machine.
DETERMINISTIC_STEPS_PER_SECOND = 200


@dataclass
class SolverConfig:
    """Knobs shared by the exact and heuristic solvers.

    ``support_threshold`` overrides the instance's threshold when set.
    ``orientations`` is 6 for free rotation or 2 to keep the height axis
    fixed.  In ``deterministic`` mode the time limit maps to a fixed
    iteration budget instead of wall-clock time.
    """

    time_limit: float = 60.0
    seed: int = 0
    support_threshold: float | None = None
    restarts: int = 4
    neighborhood: dict[str, float] = field(
        default_factory=lambda: dict(DEFAULT_NEIGHBORHOOD))
    orientations: int = 6
    deterministic: bool = False
    exact_cap: int = 4

    def __post_init__(self) -> None:
        if self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.orientations not in (2, 6):
            raise ValueError("orientations must be 2 or 6")

    def effective_support(self, inst: Instance) -> float | None:
        if self.support_threshold is not None:
            return self.support_threshold
        return inst.support_threshold

    def step_budget(self) -> int:
        return max(1, int(self.time_limit * DETERMINISTIC_STEPS_PER_SECOND))


@dataclass(frozen=True)
class CandidatePoint:
    """An anchor where a new case may be placed inside a bin."""

    bin_index: int
    x: float
    y: float
    z: float


@dataclass
class ExactResult:
    """Outcome of exhaustive grid enumeration.

    ``optimal`` is True when the enumeration ran to completion, so the
    result is the true grid optimum (or a proof of grid infeasibility when
    ``packing`` is None).
    """

    packing: Packing | None
    objective: float | None
    optimal: bool
    nodes: int = 0

    @property
    def feasible(self) -> bool:
        return self.packing is not None


@dataclass
class HeuristicResult:
    """Best packing found plus the trace of best-objective improvements."""

    packing: Packing | None
    objective: float | None
    trace: list[tuple[float, float]] = field(default_factory=list)
    restarts_run: int = 0

    @property
    def feasible(self) -> bool:
        return self.packing is not None
