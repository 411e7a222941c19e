"""Proofs: rule engine, checker, canonical enumeration and serialization.

Rules (rule set ``diag-fas-v1``)::

    R-COMP         Total(a), Total(b)  |-  Total(compose(a, b))
    R-TIME-TOTAL   InTime(e, b)        |-  Total(e)
    R-EXIST        InTime(e, b)        |-  ExistsClass(e)
    R-EXIST-TOTAL  ExistsClass(e)      |-  Total(e)
    R-SIM          ExistsClass(e)      |-  ExistsClass(t_index(e))
    R-FCOMP        ExistsClass(e)      |-  ExistsClass(compose(t_index(e), f))
                                           for f in the bound catalogue

``compose(a, b)`` runs ``a`` first, so R-FCOMP's conclusion is the machine
computing ``f(time(e, x))``.

Canonical order: proofs are ordered by number of steps, then
lexicographically by step keys. A step key puts rule applications before
axiom references; rule applications compare by rule order, premise
positions, then conclusion code, and axiom references by axiom id (newest
extension first, see :attr:`TheoryLevel.axioms`).
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from ..machine import catalogue
from ..machine.codec import compose, t_index
from .formulas import ExistsClass, Formula, InTime, Total, formula_code, parse_formula
from .theory import TheoryLevel

RULES = ("R-COMP", "R-TIME-TOTAL", "R-EXIST", "R-EXIST-TOTAL", "R-SIM", "R-FCOMP")
ARITY = {"R-COMP": 2}


@dataclass(frozen=True)
class AxiomRef:
    id: int

    def __str__(self):
        return f"AX{self.id}"


@dataclass(frozen=True)
class RuleApp:
    rule: str
    premises: Tuple[int, ...]

    def __str__(self):
        return f"{self.rule}({','.join(str(p + 1) for p in self.premises)})"


Justification = Union[AxiomRef, RuleApp]
Step = Tuple[Formula, Justification]


@dataclass(frozen=True)
class Proof:
    steps: Tuple[Step, ...]
    index: Optional[int] = None

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1][0]

    def render(self) -> str:
        return "".join(f"{k}: {f} BY {j}\n" for k, (f, j) in enumerate(self.steps, start=1))


def time_constructible() -> Tuple[int, ...]:
    """Bound machines admitted by R-FCOMP, in catalogue order."""
    return catalogue.bound_catalogue_indices()


def conclusions(rule: str, premises: Sequence[Formula]) -> List[Formula]:
    """Every formula ``rule`` derives from ``premises`` (empty if it does not apply)."""
    if rule == "R-COMP":
        a, b = premises
        if isinstance(a, Total) and isinstance(b, Total):
            return [Total(compose(a.e, b.e))]
        return []
    (p,) = premises
    if rule == "R-TIME-TOTAL" and isinstance(p, InTime):
        return [Total(p.e)]
    if rule == "R-EXIST" and isinstance(p, InTime):
        return [ExistsClass(p.e)]
    if rule == "R-EXIST-TOTAL" and isinstance(p, ExistsClass):
        return [Total(p.e)]
    if rule == "R-SIM" and isinstance(p, ExistsClass):
        return [ExistsClass(t_index(p.e))]
    if rule == "R-FCOMP" and isinstance(p, ExistsClass):
        t = t_index(p.e)
        return [ExistsClass(compose(t, f)) for f in time_constructible()]
    return []


def check_proof(p, t: TheoryLevel) -> bool:
    """Decidable proof predicate: every step is an axiom or a correct rule use."""
    if not isinstance(p, Proof) or not p.steps:
        return False
    axioms = t.axioms
    seen: List[Formula] = []
    for k, step in enumerate(p.steps):
        if not isinstance(step, tuple) or len(step) != 2:
            return False
        f, just = step
        if isinstance(just, AxiomRef):
            if not 0 <= just.id < len(axioms) or axioms[just.id] != f:
                return False
        elif isinstance(just, RuleApp):
            if just.rule not in RULES or len(just.premises) != ARITY.get(just.rule, 1):
                return False
            if any(not isinstance(i, int) or not 0 <= i < k for i in just.premises):
                return False
            if f not in conclusions(just.rule, [seen[i] for i in just.premises]):
                return False
        else:
            return False
        seen.append(f)
    return True


# -- enumeration -----------------------------------------------------------

def _step_options(t: TheoryLevel, prefix: Sequence[Formula]) -> List[Step]:
    """Every admissible next step after ``prefix``, in canonical key order."""
    opts = []
    k = len(prefix)
    for r_order, rule in enumerate(RULES):
        if rule == "R-COMP":
            for i in range(k):
                for j in range(k):
                    for f in conclusions(rule, (prefix[i], prefix[j])):
                        opts.append(((0, r_order, (i, j), formula_code(f)), (f, RuleApp(rule, (i, j)))))
        else:
            for i in range(k):
                for f in conclusions(rule, (prefix[i],)):
                    opts.append(((0, r_order, (i,), formula_code(f)), (f, RuleApp(rule, (i,)))))
    opts.sort(key=lambda kv: kv[0])
    out = [step for _, step in opts]
    out += [(a, AxiomRef(i)) for i, a in enumerate(t.axioms)]
    return out


def _band(t: TheoryLevel, length: int) -> Iterator[Tuple[Step, ...]]:
    steps: List[Step] = []
    formulas: List[Formula] = []

    def rec():
        if len(steps) == length:
            yield tuple(steps)
            return
        for step in _step_options(t, formulas):
            steps.append(step)
            formulas.append(step[0])
            yield from rec()
            steps.pop()
            formulas.pop()

    if t.axioms:
        yield from rec()


class ProofEnumerator:
    """Lazily extended, cached prefix of the canonical proof sequence."""

    def __init__(self, t: TheoryLevel):
        self.theory = t
        self._proofs: List[Proof] = []
        self._gen = self._generate()
        self._lock = threading.Lock()

    def _generate(self):
        length = 1
        while True:
            for steps in _band(self.theory, length):
                yield steps
            length += 1

    def prefix(self, n: int) -> List[Proof]:
        with self._lock:
            if not self.theory.axioms:
                return []
            while len(self._proofs) < n:
                steps = next(self._gen)
                self._proofs.append(Proof(steps, len(self._proofs)))
            return self._proofs[:n]


@lru_cache(maxsize=64)
def enumerator(t: TheoryLevel) -> ProofEnumerator:
    return ProofEnumerator(t)


def enumerate_proofs(t: TheoryLevel, n: int) -> List[Proof]:
    """The first ``n`` valid proofs of ``t`` in canonical order."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return enumerator(t).prefix(n)


def provably_total(t: TheoryLevel, n: int) -> List[int]:
    """Indices ``e`` with a proof of ``Total(e)`` among the first ``n`` proofs."""
    out: List[int] = []
    seen = set()
    for p in enumerate_proofs(t, n):
        c = p.conclusion
        if isinstance(c, Total) and c.e not in seen:
            seen.add(c.e)
            out.append(c.e)
    return out


def canonical_position(p: Proof, t: TheoryLevel) -> Optional[int]:
    """Position of a valid proof in the canonical order (``None`` if invalid)."""
    if not check_proof(p, t):
        return None
    n = 0
    chunk = 1024
    while True:
        for q in enumerate_proofs(t, n + chunk)[n:]:
            if q.steps == p.steps:
                return q.index
        n += chunk


# -- serialization ---------------------------------------------------------

_LINE = re.compile(r"^\s*(\d+):\s*(.+?)\s+BY\s+(AX(\d+)|(R-[A-Z\-]+)\(([\d,\s]*)\))\s*$")


class ProofSyntaxError(ValueError):
    pass


def parse_proof(text: str) -> Proof:
    steps: List[Step] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise ProofSyntaxError(f"line {lineno}: cannot parse {line!r}")
        num, ftext, _, ax, rule, prem = m.groups()
        if int(num) != len(steps) + 1:
            raise ProofSyntaxError(f"line {lineno}: expected step {len(steps) + 1}, got {num}")
        try:
            f = parse_formula(ftext)
        except ValueError as exc:
            raise ProofSyntaxError(f"line {lineno}: {exc}") from None
        if ax is not None:
            just: Justification = AxiomRef(int(ax))
        else:
            refs = tuple(int(s) - 1 for s in prem.replace(" ", "").split(",") if s)
            just = RuleApp(rule, refs)
        steps.append((f, just))
    return Proof(tuple(steps))
