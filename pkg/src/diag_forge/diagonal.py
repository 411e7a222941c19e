"""The diagonalizer F^(k) and the theory hierarchy S^(k).

``F_t(n)`` enumerates the first ``n`` canonical proofs of ``t``, lists every
``e`` with a proof ending in ``Total(e)`` (first-appearance order), and
returns ``1 + max {e}(x)`` over the listed ``e`` and ``x = 0 .. n`` (inputs
presented as ``(x)_2``); with nothing listed it returns 0.

Diagonalizer indices are the ``Diagonalizer`` stream of the index space.
Running one costs ``n`` work units for the proof enumeration, plus every
inner step, plus one step to emit the result (accounting version 1).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .formal.proofs import provably_total
from .formal.theory import (
    TheoryLevel,
    base_theory,
    extend_theory,
    theory_code,
    theory_from_code,
)
from .formal.formulas import ExistsClass
from .machine.codec import decode_machine, diagonalizer_code_index, is_diagonalizer_tagged
from .machine.interpreter import (
    EXHAUSTED,
    HALTED,
    ComputationHistory,
    RunOutcome,
    history_result,
    kleene_t,
    run,
)
from .machine.model import Diagonalizer, from_bits, to_bits

STEP_ACCOUNTING = 1
INPUT_MODES = ("values", "lengths")


class FuelDeficit(RuntimeError):
    """An enumerated machine did not halt within the supplied fuel."""

    def __init__(self, e: int, x: str, fuel: int):
        self.e, self.x, self.fuel = e, x, fuel
        super().__init__(f"machine {e} on input {x!r} exhausted fuel {fuel}")


@dataclass(frozen=True)
class DominanceRow:
    n: int
    F_value: int
    contributors: Tuple[Tuple[int, int, int], ...]
    F_steps: int

    @property
    def argmax(self) -> Optional[Tuple[int, int]]:
        best = None
        for e, x, v in self.contributors:
            if best is None or v > best[2]:
                best = (e, x, v)
        return None if best is None else best[:2]


@dataclass(frozen=True)
class DiagonalizerHandle:
    theory: TheoryLevel
    index: int
    level: int


def fuel_schedule(level: int, n: int) -> int:
    """Default per-run fuel for level ``level`` at argument ``n``."""
    return 10 ** 6 * (level + 1) * (n + 2)


def default_fuel() -> int:
    """Built-in default fuel, overridable through ``DIAG_FORGE_FUEL_DEFAULT``."""
    raw = os.environ.get("DIAG_FORGE_FUEL_DEFAULT")
    if raw:
        value = int(raw)
        if value < 1:
            raise ValueError("DIAG_FORGE_FUEL_DEFAULT must be >= 1")
        return value
    return 10 ** 6


def _inputs(n: int, mode: str) -> List[str]:
    if mode == "values":
        return [to_bits(v) for v in range(n + 1)]
    if mode == "lengths":
        out = [""]
        for length in range(1, n + 1):
            out += [format(v, f"0{length}b") for v in range(2 ** length)]
        return out
    raise ValueError(f"unknown input mode {mode!r}")


# -- compute_F -------------------------------------------------------------

# (theory, n, inputs) -> (row, largest single inner run)
_rows: Dict[Tuple[TheoryLevel, int, str], Tuple[DominanceRow, int]] = {}


def compute_F(t: TheoryLevel, n: int, fuel: int, inputs: str = "values") -> DominanceRow:
    """F_t(n), with every inner run limited to ``fuel`` steps."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if fuel < 1:
        raise ValueError("fuel must be >= 1")
    key = (t, n, inputs)
    hit = _rows.get(key)
    if hit is not None and hit[1] <= fuel:
        return hit[0]
    machines = provably_total(t, n)
    xs = _inputs(n, inputs)
    contributors = []
    steps = n + 1
    best = None
    max_inner = 0
    for e in machines:
        top = None
        for x in xs:
            out = run(e, x, fuel)
            if not out.halted:
                raise FuelDeficit(e, x, fuel)
            steps += out.steps
            max_inner = max(max_inner, out.steps)
            v = from_bits(out.output)
            if top is None or v > top[2]:
                top = (e, from_bits(x) if inputs == "values" else x, v)
        contributors.append(top)
        if best is None or top[2] > best:
            best = top[2]
    value = 0 if best is None else best + 1
    row = DominanceRow(n, value, tuple(contributors), steps)
    _rows[key] = (row, max_inner)
    return row


def dominance_table(t: TheoryLevel, n_max: int, fuel: int) -> List[DominanceRow]:
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    return [compute_F(t, n, fuel) for n in range(n_max + 1)]


# -- the diagonalizer as a program ----------------------------------------

def diagonalizer_index(t: TheoryLevel) -> DiagonalizerHandle:
    return DiagonalizerHandle(t, diagonalizer_code_index(theory_code(t)), t.level)


def build_hierarchy(k_max: int) -> List[Tuple[TheoryLevel, DiagonalizerHandle]]:
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    levels = []
    t = base_theory()
    for _ in range(k_max + 1):
        handle = diagonalizer_index(t)
        levels.append((t, handle))
        t = extend_theory(t, ExistsClass(handle.index))
    return levels


def _grid(t: TheoryLevel, n: int):
    return [(e, x) for e in provably_total(t, n) for x in _inputs(n, "values")]


def run_diagonalizer(prog: Diagonalizer, x: str, fuel: int, want_history: bool = False) -> RunOutcome:
    t = theory_from_code(prog.theory_code)
    n = from_bits(x)
    budget = fuel - (n + 1)
    if budget < 0:
        return EXHAUSTED
    if not want_history:
        hit = _rows.get((t, n, "values"))
        if hit is not None:
            row = hit[0]
            return RunOutcome(HALTED, to_bits(row.F_value), row.F_steps) if row.F_steps <= fuel else EXHAUSTED
    best = None
    parts = []
    for e, xi in _grid(t, n):
        if budget < 1:
            return EXHAUSTED
        out = run(e, xi, budget, want_history)
        if not out.halted:
            return EXHAUSTED
        budget -= out.steps
        parts.append(out.history)
        v = from_bits(out.output)
        best = v if best is None else max(best, v)
    value = 0 if best is None else best + 1
    hist = ComputationHistory(parts=tuple(parts)) if want_history else None
    return RunOutcome(HALTED, to_bits(value), fuel - budget, hist)


def kleene_t_diagonalizer(prog: Diagonalizer, x: str, z: ComputationHistory) -> bool:
    if z.configurations:
        return False
    t = theory_from_code(prog.theory_code)
    grid = _grid(t, from_bits(x))
    if len(grid) != len(z.parts):
        return False
    return all(kleene_t(e, xi, part) for (e, xi), part in zip(grid, z.parts))


def diagonalizer_history_result(prog: Diagonalizer, x: str, z: ComputationHistory):
    t = theory_from_code(prog.theory_code)
    n = from_bits(x)
    steps = n + 1
    best = None
    for (e, xi), part in zip(_grid(t, n), z.parts):
        out, s = history_result(e, xi, part)
        steps += s
        v = from_bits(out)
        best = v if best is None else max(best, v)
    return to_bits(0 if best is None else best + 1), steps


def theory_of(index: int) -> TheoryLevel:
    """Theory whose diagonalizer sits at ``index``."""
    if not is_diagonalizer_tagged(index):
        raise ValueError(f"{index} is not a diagonalizer index")
    return theory_from_code(decode_machine(index).theory_code)


# -- rendering -------------------------------------------------------------

TABLE_COLUMNS = ("n", "F(n)", "F_steps", "|contributors|", "argmax")


def _argmax_text(row: DominanceRow) -> str:
    am = row.argmax
    return "-" if am is None else f"({am[0]},{am[1]})"


def render_rows_tsv(rows: Sequence[DominanceRow]) -> str:
    lines = ["\t".join(TABLE_COLUMNS)]
    for r in rows:
        lines.append(f"{r.n}\t{r.F_value}\t{r.F_steps}\t{len(r.contributors)}\t{_argmax_text(r)}")
    return "\n".join(lines) + "\n"


def row_record(row: DominanceRow) -> dict:
    am = row.argmax
    return {
        "n": row.n,
        "F": str(row.F_value),
        "F_steps": str(row.F_steps),
        "contributors": [[str(e), str(x), str(v)] for e, x, v in row.contributors],
        "argmax": None if am is None else [str(am[0]), str(am[1])],
    }


def render_rows_structured(rows: Sequence[DominanceRow]) -> str:
    return json.dumps([row_record(r) for r in rows], indent=2) + "\n"
