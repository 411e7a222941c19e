"""Machine model: deterministic single-tape machines over {0, 1, blank}.

Symbols are stored as small ints (``ZERO = 0``, ``ONE = 1``, ``BLANK = 2``)
and rendered as ``'0'``, ``'1'`` and ``'_'``. A transition is a triple
``(write, move, next)`` with ``move`` in ``{L, R}`` and ``next`` either a
state number or :data:`HALT`.

Besides plain transition tables, the index space also holds three kinds of
*extension programs* (composition, time emulator, diagonalizer). They are
executed by the interpreter through their defining semantics; see
:mod:`diag_forge.machine.interpreter`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple, Union

ZERO, ONE, BLANK = 0, 1, 2
SYMBOLS = (ZERO, ONE, BLANK)
L, R = 0, 1
HALT = -1

SYMBOL_CHARS = "01_"
MOVE_CHARS = "LR"

Transition = Tuple[int, int, int]


class MachineError(ValueError):
    """Raised for machines that violate the model invariants."""


def symbol_char(sym: int) -> str:
    return SYMBOL_CHARS[sym]


def char_symbol(ch: str) -> int:
    try:
        return SYMBOL_CHARS.index(ch)
    except ValueError:
        raise MachineError(f"unknown tape symbol {ch!r}") from None


@dataclass(frozen=True)
class Machine:
    """A transition table with states ``0 .. n_states-1``.

    ``table[3*q + s]`` is the transition taken in state ``q`` reading symbol
    ``s``. The start state is always state 0; named machines are brought to
    this form by :func:`diag_forge.machine.dsl.parse_machine`.
    """

    n_states: int
    table: Tuple[Transition, ...]

    def __post_init__(self):
        if self.n_states < 1:
            raise MachineError("a machine needs at least one state")
        if len(self.table) != 3 * self.n_states:
            raise MachineError(
                f"transition table must have {3 * self.n_states} entries, "
                f"got {len(self.table)}"
            )
        for i, (w, m, nx) in enumerate(self.table):
            if w not in SYMBOLS or m not in (L, R):
                raise MachineError(f"bad transition {self.table[i]} at cell {i}")
            if nx != HALT and not 0 <= nx < self.n_states:
                raise MachineError(f"next state {nx} out of range at cell {i}")

    @property
    def start_state(self) -> int:
        return 0

    def transition(self, state: int, sym: int) -> Transition:
        return self.table[3 * state + sym]

    def describe(self) -> str:
        """Render in the machine DSL (states named ``q0``, ``q1``, ...)."""
        lines = ["start q0"]
        for q in range(self.n_states):
            for s in SYMBOLS:
                w, m, nx = self.transition(q, s)
                target = "HALT" if nx == HALT else f"q{nx}"
                lines.append(
                    f"q{q} {symbol_char(s)} -> {symbol_char(w)} {MOVE_CHARS[m]} {target}"
                )
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Composition:
    """Runs ``first`` on the input, then ``second`` on its output."""

    first: int
    second: int


@dataclass(frozen=True)
class Timer:
    """The time emulator ``t_e``: outputs ``(time(target, x))_2``."""

    target: int


@dataclass(frozen=True)
class Diagonalizer:
    """The diagonalizer for the theory with code ``theory_code``."""

    theory_code: int


Program = Union[Machine, Composition, Timer, Diagonalizer]


def to_bits(n: int) -> str:
    """``(n)_2``, most significant bit first; ``(0)_2 == '0'``."""
    if n < 0:
        raise ValueError("natural numbers only")
    return format(n, "b")


def from_bits(s: str) -> int:
    """Binary value of a 0/1 string; the empty string has value 0."""
    return int(s, 2) if s else 0
