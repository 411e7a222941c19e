"""Text format for transition tables.

One transition per line::

    # binary increment
    start right
    right 0 -> 0 R right
    right _ -> _ L carry
    carry 1 -> 0 L carry
    ...

Symbols are ``0``, ``1`` and ``_`` (blank); moves are ``L``/``R``; the
target is a state name or ``HALT``. States are numbered with the start
state first and the rest in order of first appearance as a source state, so
two files that differ only in state names give the same machine.
"""

from __future__ import annotations

import re
from typing import Dict, List, Tuple

from .model import HALT, MOVE_CHARS, SYMBOL_CHARS, SYMBOLS, Machine

_NAME = r"[A-Za-z_][A-Za-z0-9_.\-]*"
_RULE = re.compile(
    rf"^({_NAME})\s+([01_])\s*->\s*([01_])\s+([LR])\s+({_NAME})$"
)
_START = re.compile(rf"^start\s+({_NAME})$")


class DSLError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def parse_machine(text: str) -> Machine:
    start = None
    start_line = 0
    rules: Dict[Tuple[str, int], Tuple[int, int, str]] = {}
    order: List[str] = []
    first_line: Dict[str, int] = {}
    targets: List[Tuple[str, int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _START.match(line)
        if m:
            if start is not None:
                raise DSLError(lineno, f"second start declaration (first on line {start_line})")
            start, start_line = m.group(1), lineno
            continue
        m = _RULE.match(line)
        if not m:
            raise DSLError(lineno, f"cannot parse {line!r}")
        state, read, write, move, target = m.groups()
        if state == "HALT":
            raise DSLError(lineno, "HALT is not a state and has no transitions")
        key = (state, SYMBOL_CHARS.index(read))
        if key in rules:
            raise DSLError(lineno, f"duplicate transition for ({state}, {read})")
        rules[key] = (SYMBOL_CHARS.index(write), MOVE_CHARS.index(move), target)
        if state not in first_line:
            first_line[state] = lineno
            order.append(state)
        if target != "HALT":
            targets.append((target, lineno))

    if start is None:
        raise DSLError(max(1, len(text.splitlines())), "missing 'start <state>' line")
    if start not in first_line:
        raise DSLError(start_line, f"start state {start!r} has no transitions")
    for target, lineno in targets:
        if target not in first_line:
            raise DSLError(lineno, f"state {target!r} has no transitions")
    for state in order:
        for sym in SYMBOLS:
            if (state, sym) not in rules:
                raise DSLError(
                    first_line[state],
                    f"state {state!r} has no transition on {SYMBOL_CHARS[sym]!r}",
                )

    names = [start] + [s for s in order if s != start]
    number = {name: i for i, name in enumerate(names)}
    table = []
    for name in names:
        for sym in SYMBOLS:
            w, m, target = rules[(name, sym)]
            table.append((w, m, HALT if target == "HALT" else number[target]))
    return Machine(len(names), tuple(table))


def load_machine(path) -> Machine:
    with open(path) as fh:
        return parse_machine(fh.read())
