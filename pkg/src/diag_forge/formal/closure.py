"""Bounded least fixed point of the rule set.

Every rule's conclusion index is at least as large as its premise indices
(``compose`` and ``t_index`` only grow), so the formulas with indices
``<= size_bound`` are closed under derivation from smaller ones and the
bounded fixed point is exactly the set of derivable formulas in range.
"""

from __future__ import annotations

from bisect import insort
from typing import Set

from ..machine.codec import compose, t_index
from .formulas import ExistsClass, InTime, Total
from .proofs import time_constructible
from .theory import TheoryLevel


def derivable_exists_closure(t: TheoryLevel, size_bound: int) -> Set[int]:
    """All ``e <= size_bound`` with ``ExistsClass(e)`` derivable in ``t``."""
    if size_bound < 0:
        raise ValueError("size_bound must be >= 0")
    seeds = set()
    for a in t.axioms:
        if isinstance(a, ExistsClass) and a.e <= size_bound:
            seeds.add(a.e)
        elif isinstance(a, InTime) and a.e <= size_bound:
            seeds.add(a.e)
    bounds = time_constructible()
    found = set(seeds)
    work = list(seeds)
    while work:
        e = work.pop()
        t_e = t_index(e)
        if t_e > size_bound:
            continue
        for c in [t_e] + [compose(t_e, f) for f in bounds]:
            if c <= size_bound and c not in found:
                found.add(c)
                work.append(c)
    return found


def derivable_total_closure(t: TheoryLevel, size_bound: int) -> Set[int]:
    """All ``e <= size_bound`` with ``Total(e)`` derivable in ``t`` at any proof length."""
    totals = set(derivable_exists_closure(t, size_bound))
    for a in t.axioms:
        if isinstance(a, (Total, InTime)) and a.e <= size_bound:
            totals.add(a.e)
    ordered = sorted(totals)
    work = list(ordered)
    while work:
        a = work.pop()
        for other in list(ordered):
            c1, c2 = compose(a, other), compose(other, a)
            # compose is increasing in both arguments
            if c1 > size_bound and c2 > size_bound:
                break
            for c in (c1, c2):
                if c <= size_bound and c not in totals:
                    totals.add(c)
                    insort(ordered, c)
                    work.append(c)
    return totals
