"""Theories ``S^(k)``: base axioms, the ExistsClass extensions, the rule set.

Theory file format::

    ruleset diag-fas-v1
    axioms
    Total(0)
    InTime(112563580,...)
    extends
    ExistsClass(1731)

Blank lines and ``#`` comments are ignored. ``extends`` lists the added
axioms in the order they were adjoined.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Tuple

from ..machine import catalogue
from ..machine.codec import decode_list, encode_list, pair, unpair
from .formulas import ExistsClass, Formula, InTime, Total, parse_formula

RULESET = "diag-fas-v1"

# base-set ids inside theory codes
SHIPPED_BASE_ID = 0
EMPTY_BASE_ID = 1


class TheoryError(ValueError):
    pass


@dataclass(frozen=True)
class TheoryLevel:
    base_axioms: Tuple[Formula, ...]
    added_axioms: Tuple[ExistsClass, ...] = ()
    rules: str = RULESET

    def __post_init__(self):
        for a in self.added_axioms:
            if not isinstance(a, ExistsClass):
                raise TheoryError(f"added axioms must be ExistsClass, got {a}")

    @property
    def level(self) -> int:
        return len(self.added_axioms)

    @property
    def axioms(self) -> Tuple[Formula, ...]:
        """Axioms in reference order: newest extension first, then the base."""
        return tuple(reversed(self.added_axioms)) + self.base_axioms

    def render(self) -> str:
        lines = [f"ruleset {self.rules}", "axioms"]
        lines += [str(f) for f in self.base_axioms]
        if self.added_axioms:
            lines.append("extends")
            lines += [str(f) for f in self.added_axioms]
        return "\n".join(lines) + "\n"


def base_bound_index() -> int:
    """Bound machine ``m -> 2^(|(m)_2| + 2)`` used in the base InTime axioms."""
    return catalogue.pow_len_index(1, 2)


@lru_cache(maxsize=None)
def base_theory() -> TheoryLevel:
    idx = catalogue.base_indices()
    b = base_bound_index()
    axioms: List[Formula] = [Total(idx[name]) for name in catalogue.BASE_NAMES]
    axioms += [InTime(idx[name], b) for name in catalogue.BASE_NAMES]
    return TheoryLevel(tuple(axioms))


def extend_theory(t: TheoryLevel, a: Formula) -> TheoryLevel:
    if not isinstance(a, ExistsClass):
        raise TheoryError(f"only ExistsClass axioms can extend a theory, got {a}")
    return TheoryLevel(t.base_axioms, t.added_axioms + (a,), t.rules)


def parse_theory(text: str) -> TheoryLevel:
    section = None
    ruleset = None
    base: List[Formula] = []
    added: List[ExistsClass] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("ruleset "):
            ruleset = line.split(None, 1)[1]
            if ruleset != RULESET:
                raise TheoryError(f"line {lineno}: unsupported rule set {ruleset!r}")
            continue
        if line in ("axioms", "extends"):
            section = line
            continue
        if section is None:
            raise TheoryError(f"line {lineno}: formula outside a section")
        try:
            f = parse_formula(line)
        except ValueError as exc:
            raise TheoryError(f"line {lineno}: {exc}") from None
        if section == "axioms":
            base.append(f)
        elif not isinstance(f, ExistsClass):
            raise TheoryError(f"line {lineno}: extensions must be ExistsClass formulas")
        else:
            added.append(f)
    if ruleset is None:
        raise TheoryError("missing 'ruleset' header")
    return TheoryLevel(tuple(base), tuple(added))


def load_theory(path) -> TheoryLevel:
    with open(path) as fh:
        return parse_theory(fh.read())


# -- theory numbering --------------------------------------------------------
# The diagonalizer of a theory lives at an index computed from the theory's
# code, so the code must be a function of the theory. Base axiom sets other
# than the shipped and the empty one are registered in a process-local table.

_registry_lock = threading.Lock()
_base_sets: Dict[Tuple[Formula, ...], int] = {}
_base_by_id: Dict[int, Tuple[Formula, ...]] = {}


def _base_id(base: Tuple[Formula, ...]) -> int:
    if base == base_theory().base_axioms:
        return SHIPPED_BASE_ID
    if not base:
        return EMPTY_BASE_ID
    with _registry_lock:
        if base not in _base_sets:
            new_id = 2 + len(_base_sets)
            _base_sets[base] = new_id
            _base_by_id[new_id] = base
        return _base_sets[base]


def _base_from_id(base_id: int) -> Tuple[Formula, ...]:
    if base_id == SHIPPED_BASE_ID:
        return base_theory().base_axioms
    # unregistered ids denote the empty base set
    return _base_by_id.get(base_id, ())


def theory_code(t: TheoryLevel) -> int:
    return pair(_base_id(t.base_axioms), encode_list([a.e for a in t.added_axioms]))


def theory_from_code(code: int) -> TheoryLevel:
    base_id, added = unpair(code)
    return TheoryLevel(_base_from_id(base_id), tuple(ExistsClass(e) for e in decode_list(added)))
