"""Time bounds, class-membership formulas and empirical membership checks.

A bound machine ``b`` receives ``(|x|)_2`` and outputs ``(h)_2``; a run of
``e`` on ``x`` respects ``b`` when ``time(e, x) <= h``. Constants are part of
each catalogue machine, so checks compare the literal inequality.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

from .diagonal import DiagonalizerHandle, FuelDeficit, compute_F
from .formal.formulas import ExistsClass, Formula, InTime
from .machine import catalogue
from .machine.interpreter import run
from .machine.model import from_bits, to_bits

ANY = "ANY"


@dataclass(frozen=True)
class BoundCatalogueEntry:
    name: str
    machine: int
    growth_note: str


_NOTES = {
    "const1": "h = 1",
    "linear": "h = 2^(|m|+2) where m = |x|; between 4|x| and 8|x| for |x| >= 1",
    "quadratic": "h = 2^(2|m|+2); at least 4|x|^2",
    "cubic": "h = 2^(3|m|+2); at least 4|x|^3",
    "exp": "h = 2^(|x|+7)",
    "hyperexp": "h = 2^(2^|x| + 7), two stacked exponentials",
}


def bound_entry(name: str) -> BoundCatalogueEntry:
    """Catalogue entry by name (``poly5``, ``hyperexp3`` and so on included)."""
    idx = catalogue.bound_index(name)
    if name in _NOTES:
        note = _NOTES[name]
    elif name.startswith("poly"):
        k = int(name[4:])
        note = f"h = 2^({k}|m|+2); at least 4|x|^{k}"
    else:
        depth = int(name[8:])
        note = f"h = 2^(2^...^|x| + 7) with {depth} exponentials"
    return BoundCatalogueEntry(name, idx, note)


def bound_catalogue() -> List[BoundCatalogueEntry]:
    return [bound_entry(name) for name in catalogue.BOUND_NAMES]


def bound_value(b: int, length: int, fuel: int) -> int:
    """``h`` computed by bound machine ``b`` for inputs of length ``length``."""
    out = run(b, to_bits(length), fuel)
    if not out.halted:
        raise FuelDeficit(b, to_bits(length), fuel)
    return from_bits(out.output)


# -- formulas --------------------------------------------------------------

def membership_wff(e: int, b: Union[int, str]) -> Formula:
    """``InTime(e, b)`` for an explicit bound, ``ExistsClass(e)`` for ``ANY``."""
    if b == ANY:
        return ExistsClass(e)
    return InTime(e, b)


# -- verdicts --------------------------------------------------------------

@dataclass(frozen=True)
class VerifiedUpTo:
    n: int

    def __str__(self):
        return f"VerifiedUpTo({self.n})"


@dataclass(frozen=True)
class Counterexample:
    x: str
    actual_steps: int
    allowed_bound: int

    def __str__(self):
        return f"Counterexample(x={self.x or '-'}, steps={self.actual_steps}, bound={self.allowed_bound})"


MembershipVerdict = Union[VerifiedUpTo, Counterexample]


def _violation(e: int, b: int, v: int, fuel: int) -> Optional[Counterexample]:
    x = to_bits(v)
    out = run(e, x, fuel)
    if not out.halted:
        raise FuelDeficit(e, x, fuel)
    h = bound_value(b, len(x), fuel)
    if out.steps > h:
        return Counterexample(x, out.steps, h)
    return None


def check_membership(e: int, b: int, n_max: int, fuel: int, jobs: int = 1) -> MembershipVerdict:
    """Scan ``x = (0)_2 .. (n_max)_2``; report the smallest violating ``x``."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if jobs <= 1:
        for v in range(n_max + 1):
            bad = _violation(e, b, v, fuel)
            if bad is not None:
                return bad
        return VerifiedUpTo(n_max)
    with ThreadPoolExecutor(jobs) as pool:
        results = list(pool.map(lambda v: _violation(e, b, v, fuel), range(n_max + 1)))
    for bad in results:
        if bad is not None:
            return bad
    return VerifiedUpTo(n_max)


def output_length_check(e: int, x: str, fuel: int) -> bool:
    """``|output| <= steps + |x|`` for a halting run."""
    out = run(e, x, fuel)
    if not out.halted:
        raise FuelDeficit(e, x, fuel)
    return len(out.output) <= out.steps + len(x)


# -- growth report ---------------------------------------------------------

REPORT_COLUMNS = ("level", "n", "F_value", "steps", "out_bits", "crossing_flag")


@dataclass(frozen=True)
class GrowthCell:
    level: int
    n: int
    F_value: int
    steps: int
    out_bits: int
    crossing: Optional[bool]


def growth_report(levels: Sequence[DiagonalizerHandle], n_max: int, fuel: int) -> List[GrowthCell]:
    """F^(k)(n), its step count and output width for each level and n.

    The flag on row ``(k, n)`` compares the output width of level ``k+1``
    with the step count of level ``k``; the top level has no flag.
    """
    rows = [[compute_F(h.theory, n, fuel) for n in range(n_max + 1)] for h in levels]
    cells = []
    for i, h in enumerate(levels):
        for n, row in enumerate(rows[i]):
            flag = None
            if i + 1 < len(levels):
                flag = len(to_bits(rows[i + 1][n].F_value)) > row.F_steps
            cells.append(GrowthCell(h.level, n, row.F_value, row.F_steps, len(to_bits(row.F_value)), flag))
    return cells


def render_growth_tsv(cells: Sequence[GrowthCell]) -> str:
    lines = ["\t".join(REPORT_COLUMNS)]
    for c in cells:
        flag = "-" if c.crossing is None else ("1" if c.crossing else "0")
        lines.append(f"{c.level}\t{c.n}\t{c.F_value}\t{c.steps}\t{c.out_bits}\t{flag}")
    return "\n".join(lines) + "\n"
