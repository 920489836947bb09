"""Geometric feasibility judgement for (instance, packing) pairs.

The validator works on coordinates directly, with no model involved, and
returns a verdict per constraint family rather than raising: infeasibility
is a result, not an error.  Families:

    orientation  orientation index outside 1..6 (defensive; normal
                 construction already rejects these)
    assignment   structural case/bin bookkeeping
    overlap      two cases in the same bin intersect as open boxes
    boundary     a case leaves its bin's window in x, y or z
    bin_gap      a case straddles the seam between two bins
    support      credited support area below the threshold fraction
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .geometry import (
    DEFAULT_TOL,
    Instance,
    Packing,
    check_packing,
    footprint_area,
    ground_support,
    objective_value,
    penetration_depth,
    placed_box,
    support_area,
)
from .metrics import bin_utilizations

FAMILIES = ("orientation", "assignment", "overlap", "boundary", "bin_gap", "support")

_FAMILY_ORDER = {name: pos for pos, name in enumerate(FAMILIES)}


@dataclass(frozen=True)
class Violation:
    family: str
    cases: tuple[int, ...]
    magnitude: float

    def to_dict(self) -> dict:
        return {"family": self.family, "cases": list(self.cases),
                "magnitude": self.magnitude}


@dataclass
class AuditReport:
    """Verdict plus per-family violations and solution metrics."""

    feasible: bool
    violations: list[Violation]
    objective: float
    utilization: dict[int, float]
    support_coverage: dict[int, float] = field(default_factory=dict)

    @property
    def overall(self) -> str:
        return "feasible" if self.feasible else "infeasible"

    def to_dict(self) -> dict:
        return {
            "overall": self.overall,
            "violations": [v.to_dict() for v in self.violations],
            "metrics": {
                "objective": self.objective,
                "utilization": {str(j): u for j, u in sorted(self.utilization.items())},
                "support_coverage": {str(i): c for i, c in
                                     sorted(self.support_coverage.items())},
            },
        }


def validate(inst: Instance, pack: Packing, tol: float = DEFAULT_TOL,
             support: float | None = None) -> AuditReport:
    """Judge a packing against the geometric packing semantics.

    ``support`` overrides the instance's own support threshold; pass None
    to fall back to it (and to disabled when the instance has none).
    Raises only for structurally broken packings (wrong placement count or
    out-of-range indices); every geometric defect becomes a violation.
    """
    check_packing(inst, pack)
    threshold = support if support is not None else inst.support_threshold
    violations: list[Violation] = []

    boxes = {}
    for p in pack.placements:
        boxes[p.case_index] = placed_box(inst.cases[p.case_index], p)

    # Boundary: each case within its bin's window along all three axes.
    for p in pack.placements:
        box = boxes[p.case_index]
        start, end = inst.bin_window(p.bin_index)
        bn = inst.bins[p.bin_index]
        spill = max(start - box.x, box.x + box.dx - end,
                    box.y + box.dy - bn.width, box.top - bn.height)
        if spill > tol:
            violations.append(Violation("boundary", (p.case_index,), spill))

    # Bin gap: the x interval must not strictly contain an internal seam.
    for p in pack.placements:
        box = boxes[p.case_index]
        for seam in inst.cum_lengths[:-1]:
            if box.x < seam - tol and box.x + box.dx > seam + tol:
                depth = min(seam - box.x, box.x + box.dx - seam)
                violations.append(Violation("bin_gap", (p.case_index,), depth))

    # Overlap: same-bin pairs must be disjoint as open boxes.
    by_bin: dict[int, list[int]] = {}
    for p in pack.placements:
        by_bin.setdefault(p.bin_index, []).append(p.case_index)
    for members in by_bin.values():
        for a_pos, i in enumerate(members):
            for i2 in members[a_pos + 1:]:
                depth = penetration_depth(boxes[i], boxes[i2])
                if depth > tol:
                    violations.append(Violation("overlap", (min(i, i2), max(i, i2)), depth))

    # Support: credited contact area against the threshold fraction.
    coverage: dict[int, float] = {}
    if threshold is not None:
        for p in pack.placements:
            i = p.case_index
            box = boxes[i]
            credit = ground_support(box, tol)
            for p2 in pack.placements:
                if p2.case_index == i or p2.bin_index != p.bin_index:
                    continue
                credit += support_area(boxes[p2.case_index], box, tol)
            footprint = box.footprint
            coverage[i] = credit / footprint if footprint > 0 else 1.0
            deficit = threshold * footprint - credit
            if deficit > tol:
                violations.append(Violation("support", (i,), deficit))

    violations.sort(key=lambda v: (_FAMILY_ORDER[v.family], v.cases))
    return AuditReport(
        feasible=not violations,
        violations=violations,
        objective=objective_value(inst, pack),
        utilization=bin_utilizations(inst, pack),
        support_coverage=coverage,
    )


def separating_relations(a, b, tol: float = DEFAULT_TOL) -> tuple[int, ...]:
    """Relations (0..5) that hold between two placed boxes.

    0: a left of b, 1: a behind b, 2: a below b; 3..5 swap the roles.
    Disjoint boxes always satisfy at least one.
    """
    out = []
    pairs = ((a.x, a.dx, b.x), (a.y, a.dy, b.y), (a.z, a.dz, b.z),
             (b.x, b.dx, a.x), (b.y, b.dy, a.y), (b.z, b.dz, a.z))
    for q, (lo, ext, hi) in enumerate(pairs):
        if lo + ext <= hi + tol:
            out.append(q)
    return tuple(out)
