"""LP and MPS text emission for generated models.

Output is byte-deterministic for a given model.  The LP dialect follows
the common CPLEX/Gurobi grammar: a quadratic product inside a constraint
is written as a ``[ ... ]`` block, which restricts quadratic models to LP
output; MPS output accepts linearized models only.
"""

from __future__ import annotations

from .model import BINARY, Model


class UnsupportedModeError(ValueError):
    """The requested text format cannot express this model."""


def _num(value: float) -> str:
    """Shortest exact decimal for a coefficient; never ``-0``."""
    if value == 0:
        return "0"
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _signed(value: float) -> str:
    return f"- {_num(-value)}" if value < 0 else f"+ {_num(value)}"


def _wrap(parts: list[str], indent: str = "  ", per_line: int = 8) -> list[str]:
    lines = []
    for start in range(0, len(parts), per_line):
        lines.append(indent + " ".join(parts[start:start + per_line]))
    return lines


def emit_lp(model: Model) -> str:
    """Render the model as LP text."""
    reg = model.registry
    out: list[str] = [f"\\ Model for instance {model.instance.name}"]
    out.append("Minimize")
    obj_parts = [f"{_signed(coef)} {reg[idx].name}" for idx, coef in model.objective]
    out.append(" obj:")
    out.extend(_wrap(obj_parts))
    out.append("Subject To")
    for con in model.constraints:
        parts = [f"{_signed(coef)} {reg[idx].name}" for idx, coef in con.terms]
        if con.qterms:
            qparts = [f"{_signed(coef)} {reg[a].name} * {reg[b].name}"
                      for a, b, coef in con.qterms]
            parts.append("+ [ " + " ".join(qparts) + " ]")
        sense = con.sense if con.sense != "=" else "="
        out.append(f" {con.name}:")
        out.extend(_wrap(parts))
        out.append(f"  {sense} {_num(con.rhs)}")
    out.append("Bounds")
    for var in reg:
        if var.kind == BINARY:
            if var.ub == 0:
                out.append(f" {var.name} = 0")
            continue
        out.append(f" {_num(var.lb)} <= {var.name} <= {_num(var.ub)}")
    out.append("Binaries")
    binaries = [var.name for var in reg if var.kind == BINARY]
    out.extend(_wrap(binaries, indent=" ", per_line=8))
    out.append("End")
    return "\n".join(out) + "\n"


def emit_mps(model: Model) -> str:
    """Render a linearized model as free-format MPS text."""
    if model.mode != "linearized":
        raise UnsupportedModeError(
            "MPS output requires a linearized model; quadratic rows have no MPS form")
    reg = model.registry
    out: list[str] = [f"NAME {model.instance.name}"]
    out.append("ROWS")
    out.append(" N obj")
    sense_tag = {"<=": "L", ">=": "G", "=": "E"}
    for con in model.constraints:
        out.append(f" {sense_tag[con.sense]} {con.name}")

    # Column-major entries, variables in registry order, rows in model order.
    columns: dict[int, list[tuple[str, float]]] = {idx: [] for idx in range(len(reg))}
    for idx, coef in model.objective:
        columns[idx].append(("obj", coef))
    for con in model.constraints:
        for idx, coef in con.terms:
            columns[idx].append((con.name, coef))

    out.append("COLUMNS")
    in_integer = False
    for idx, var in enumerate(reg):
        is_int = var.kind == BINARY
        if is_int and not in_integer:
            out.append("    MARKER M1 'MARKER' 'INTORG'")
            in_integer = True
        elif not is_int and in_integer:
            out.append("    MARKER M2 'MARKER' 'INTEND'")
            in_integer = False
        entries = columns[idx]
        if not entries:
            entries = [("obj", 0.0)]
        for row, coef in entries:
            out.append(f"    {var.name} {row} {_num(coef)}")
    if in_integer:
        out.append("    MARKER M3 'MARKER' 'INTEND'")

    out.append("RHS")
    for con in model.constraints:
        if con.rhs != 0:
            out.append(f"    RHS {con.name} {_num(con.rhs)}")
    out.append("BOUNDS")
    for var in reg:
        if var.kind == BINARY:
            if var.ub == 0:
                out.append(f" FX BND {var.name} 0")
            else:
                out.append(f" BV BND {var.name}")
        else:
            if var.lb != 0:
                out.append(f" LO BND {var.name} {_num(var.lb)}")
            out.append(f" UP BND {var.name} {_num(var.ub)}")
    out.append("ENDATA")
    return "\n".join(out) + "\n"
