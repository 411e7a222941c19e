"""Step-counted execution, computation histories and the Kleene T check.

Conventions:

* the input is written from cell 0 and the head starts on cell 0 in the
  start state;
* every transition, including the one into HALT, costs one step;
* the output is the maximal run of non-blank cells starting under the head
  (empty if the head rests on a blank).

Extension programs run by their defining semantics:

* ``Composition(a, b)``: ``a`` on ``x``, then ``b`` on that output; steps add.
* ``Timer(e)``: runs ``e``; outputs ``(t)_2`` for ``t = time(e, x)`` and costs
  ``2*t + |(t)_2|`` steps (one emulated step plus an amortised counter
  increment per step, then the counter copy-out).
* ``Diagonalizer(code)``: see :mod:`diag_forge.diagonal`.

Their histories are *structured*: ``parts`` holds the sub-run histories in
execution order and ``configurations`` is empty.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from .codec import decode_machine
from .model import (
    BLANK,
    HALT,
    Composition,
    Diagonalizer,
    Machine,
    Program,
    Timer,
    char_symbol,
    from_bits,
    symbol_char,
    to_bits,
)

HALTED = "halted"
FUEL_EXHAUSTED = "fuel_exhausted"


class Configuration(NamedTuple):
    """Machine state, head cell and the non-blank span of the tape.

    ``tape`` is stripped of blanks at both ends and starts at cell
    ``offset``; an all-blank tape is ``('', 0)``.
    """

    state: int
    head: int
    tape: str
    offset: int


@dataclass(frozen=True)
class ComputationHistory:
    configurations: Tuple[Configuration, ...] = ()
    parts: Tuple["ComputationHistory", ...] = ()


@dataclass(frozen=True)
class RunOutcome:
    status: str
    output: Optional[str] = None
    steps: Optional[int] = None
    history: Optional[ComputationHistory] = field(default=None, compare=False)

    @property
    def halted(self) -> bool:
        return self.status == HALTED

    @property
    def value(self) -> int:
        """Binary value of the output (the module-wide number convention)."""
        if not self.halted:
            raise ValueError("no output: run did not halt")
        return from_bits(self.output)


EXHAUSTED = RunOutcome(FUEL_EXHAUSTED)


def _resolve(e: Union[int, Program]) -> Program:
    return decode_machine(e) if isinstance(e, int) else e


def _check_input(x: str) -> None:
    if any(c not in "01" for c in x):
        raise ValueError(f"inputs are binary strings, got {x!r}")


# -- tables ----------------------------------------------------------------

class Tape:
    """A growable bytearray of symbols addressed by signed cell numbers."""

    __slots__ = ("cells", "origin")

    def __init__(self, x: str, margin: int = 16):
        self.cells = bytearray([BLANK]) * margin
        self.cells += bytearray(char_symbol(c) for c in x)
        self.cells += bytearray([BLANK]) * margin
        self.origin = margin

    def grow(self, pos: int) -> int:
        """Make physical ``pos`` valid; returns the shift applied to positions."""
        n = len(self.cells)
        if pos < 0:
            extra = max(n, 16)
            self.cells[0:0] = bytearray([BLANK]) * extra
            self.origin += extra
            return extra
        self.cells += bytearray([BLANK]) * max(n, 16)
        return 0

    def snapshot(self, state: int, phys_head: int) -> Configuration:
        raw = bytes(self.cells)
        lo = 0
        while lo < len(raw) and raw[lo] == BLANK:
            lo += 1
        if lo == len(raw):
            return Configuration(state, phys_head - self.origin, "", 0)
        hi = len(raw)
        while raw[hi - 1] == BLANK:
            hi -= 1
        text = "".join(symbol_char(s) for s in raw[lo:hi])
        return Configuration(state, phys_head - self.origin, text, lo - self.origin)

    def output_from(self, phys_head: int) -> str:
        out = []
        cells = self.cells
        i = phys_head
        while 0 <= i < len(cells) and cells[i] != BLANK:
            out.append("1" if cells[i] else "0")
            i += 1
        return "".join(out)


def _flatten(machine: Machine):
    return [(w, 1 if m else -1, nx) for (w, m, nx) in machine.table]


def run_table(machine: Machine, x: str, fuel: int, want_history: bool = False) -> RunOutcome:
    trans = _flatten(machine)
    tape = Tape(x)
    cells = tape.cells
    head = tape.origin
    state = 0
    steps = 0
    history: Optional[List[Configuration]] = None
    if want_history:
        history = [tape.snapshot(state, head)]
    while steps < fuel:
        w, mv, nx = trans[3 * state + cells[head]]
        cells[head] = w
        head += mv
        steps += 1
        if head < 0 or head >= len(cells):
            head += tape.grow(head)
            cells = tape.cells
        if nx == HALT:
            if history is not None:
                history.append(tape.snapshot(HALT, head))
            hist = ComputationHistory(tuple(history)) if history is not None else None
            return RunOutcome(HALTED, tape.output_from(head), steps, hist)
        state = nx
        if history is not None:
            history.append(tape.snapshot(state, head))
    return EXHAUSTED


# -- dispatch --------------------------------------------------------------

def run(e: Union[int, Program], x: str, fuel: int, want_history: bool = False) -> RunOutcome:
    """Run program ``e`` on ``x`` for at most ``fuel`` steps."""
    if fuel < 1:
        raise ValueError("fuel must be >= 1")
    _check_input(x)
    prog = _resolve(e)
    if isinstance(prog, Machine):
        return run_table(prog, x, fuel, want_history)
    if isinstance(prog, Composition):
        return _run_composition(prog, x, fuel, want_history)
    if isinstance(prog, Timer):
        return _run_timer(prog, x, fuel, want_history)
    if isinstance(prog, Diagonalizer):
        from ..diagonal import run_diagonalizer

        return run_diagonalizer(prog, x, fuel, want_history)
    raise TypeError(f"not a program: {prog!r}")


def _run_composition(prog: Composition, x: str, fuel: int, want_history: bool) -> RunOutcome:
    first = run(prog.first, x, fuel, want_history)
    if not first.halted or first.steps >= fuel:
        return EXHAUSTED
    second = run(prog.second, first.output, fuel - first.steps, want_history)
    if not second.halted:
        return EXHAUSTED
    hist = None
    if want_history:
        hist = ComputationHistory(parts=(first.history, second.history))
    return RunOutcome(HALTED, second.output, first.steps + second.steps, hist)


def timer_cost(t: int) -> int:
    return 2 * t + len(to_bits(t))


def _run_timer(prog: Timer, x: str, fuel: int, want_history: bool) -> RunOutcome:
    inner = run(prog.target, x, fuel, want_history)
    if not inner.halted or timer_cost(inner.steps) > fuel:
        return EXHAUSTED
    hist = ComputationHistory(parts=(inner.history,)) if want_history else None
    return RunOutcome(HALTED, to_bits(inner.steps), timer_cost(inner.steps), hist)


def time_of(e: Union[int, Program], x: str, fuel: int) -> Optional[int]:
    """``time(e, x)`` if the run halts within ``fuel``, else ``None``."""
    out = run(e, x, fuel)
    return out.steps if out.halted else None


# -- Kleene T --------------------------------------------------------------

def start_configuration(x: str) -> Configuration:
    return Configuration(0, 0, x, 0)


def _cell(conf: Configuration, pos: int) -> str:
    i = pos - conf.offset
    if 0 <= i < len(conf.tape):
        return conf.tape[i]
    return "_"


def _normalise(state: int, head: int, cells: dict) -> Configuration:
    live = sorted(p for p, c in cells.items() if c != "_")
    if not live:
        return Configuration(state, head, "", 0)
    lo, hi = live[0], live[-1]
    text = "".join(cells.get(p, "_") for p in range(lo, hi + 1))
    return Configuration(state, head, text, lo)


def successor(machine: Machine, conf: Configuration) -> Configuration:
    """The configuration one transition after ``conf`` (which must not be halted)."""
    sym = char_symbol(_cell(conf, conf.head))
    w, m, nx = machine.transition(conf.state, sym)
    cells = {conf.offset + i: c for i, c in enumerate(conf.tape)}
    cells[conf.head] = symbol_char(w)
    return _normalise(nx, conf.head + (1 if m else -1), cells)


def _well_formed(conf, n_states: int) -> bool:
    if not isinstance(conf, Configuration):
        return False
    if not isinstance(conf.state, int) or not isinstance(conf.head, int):
        return False
    if not isinstance(conf.offset, int) or not isinstance(conf.tape, str):
        return False
    if conf.state != HALT and not 0 <= conf.state < n_states:
        return False
    if any(c not in "01_" for c in conf.tape):
        return False
    if conf.tape and (conf.tape[0] == "_" or conf.tape[-1] == "_"):
        return False
    return conf.tape != "" or conf.offset == 0


def history_output(z: ComputationHistory) -> str:
    """Output left on the tape by the last configuration of a table history."""
    last = z.configurations[-1]
    out = []
    pos = last.head
    while _cell(last, pos) != "_":
        out.append(_cell(last, pos))
        pos += 1
    return "".join(out)


def history_result(e: Union[int, Program], x: str, z: ComputationHistory) -> Tuple[str, int]:
    """``(output, steps)`` recorded by a history already accepted by :func:`kleene_t`."""
    prog = _resolve(e)
    if isinstance(prog, Machine):
        return history_output(z), len(z.configurations) - 1
    if isinstance(prog, Composition):
        out1, s1 = history_result(prog.first, x, z.parts[0])
        out2, s2 = history_result(prog.second, out1, z.parts[1])
        return out2, s1 + s2
    if isinstance(prog, Timer):
        _, t = history_result(prog.target, x, z.parts[0])
        return to_bits(t), timer_cost(t)
    from ..diagonal import diagonalizer_history_result

    return diagonalizer_history_result(prog, x, z)


def kleene_t(e: Union[int, Program], x: str, z) -> bool:
    """True iff ``z`` is the exact halting computation history of ``e`` on ``x``."""
    if not isinstance(z, ComputationHistory) or not isinstance(x, str):
        return False
    if any(c not in "01" for c in x):
        return False
    prog = _resolve(e)
    if isinstance(prog, Machine):
        return _kleene_table(prog, x, z)
    if isinstance(prog, Composition):
        if z.configurations or len(z.parts) != 2:
            return False
        first, second = z.parts
        if not kleene_t(prog.first, x, first):
            return False
        mid, _ = history_result(prog.first, x, first)
        return kleene_t(prog.second, mid, second)
    if isinstance(prog, Timer):
        return not z.configurations and len(z.parts) == 1 and kleene_t(prog.target, x, z.parts[0])
    if isinstance(prog, Diagonalizer):
        from ..diagonal import kleene_t_diagonalizer

        return kleene_t_diagonalizer(prog, x, z)
    return False


def _kleene_table(machine: Machine, x: str, z: ComputationHistory) -> bool:
    confs = z.configurations
    if z.parts or len(confs) < 2:
        return False
    if not all(_well_formed(c, machine.n_states) for c in confs):
        return False
    if confs[0] != start_configuration(x):
        return False
    for prev, nxt in zip(confs, confs[1:]):
        if prev.state == HALT:
            return False
        if successor(machine, prev) != nxt:
            return False
    return confs[-1].state == HALT


def iter_inputs(max_len: int) -> Iterator[str]:
    """All binary strings of length 0 .. max_len in length-lex order."""
    yield ""
    for n in range(1, max_len + 1):
        for v in range(2 ** n):
            yield format(v, f"0{n}b")


def inputs_for_values(values: Sequence[int]) -> List[str]:
    return [to_bits(v) for v in values]
