"""An in-model universal machine ``u``.

``u`` is an ordinary table machine. It works on *chars*: blocks of four
cells holding a 4-bit code, with an all-blank block ("virgin") marking
unused tape. The pair encoding of ``(e, x)`` is a char stream::

    LM  SEP* rule(0,0) SEP rule(0,1) SEP rule(0,_) ... SEP rule(k-1,_)  MID  x...

A rule is ``W M N^n``: the written symbol, the move (``S0`` = L, ``S1`` = R)
and ``n`` unary marks where ``n = 0`` means HALT and otherwise the next
state is ``n - 1``. The stream ends at ``MID``, so the description is
self-delimiting; ``x`` follows one char per bit, with the simulated head
marked (``H0``/``H1``, or ``HB`` when ``x`` is empty).

The current state is kept in unary (``U`` chars) left of ``LM``. One
simulated step: find the head mark, move the ``SEP*`` cursor three
separators per ``U`` and then one per symbol value, read the rule, rewrite
the register, apply the write and move. On HALT the output bits are copied
into plain cells after a one-char gap and ``u`` halts on the first of them.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .codec import decode_machine, program_length
from .interpreter import Tape, _check_input
from .model import BLANK, HALT, L, R, Machine

# char codes
S0, S1, SB, H0, H1, HB, N, NM, SEP, SEPM, U, UM, LM, MID = range(14)
VIRGIN = -1
SAME = -2
SIM_CHARS = (S0, S1, SB)
HEAD_OF = {S0: H0, S1: H1, SB: HB}
MARKED = {H0: 0, H1: 1, HB: 2}
CODE_WIDTH = 4


class FuelExhausted(RuntimeError):
    pass


# -- the char-level program ------------------------------------------------
# delta(ms, c) -> (write, move, next). Raw states (output phase) read single
# cells; their names start with "raw".

def _delta(ms, c):
    kind = ms[0]
    if kind == "find_head":
        if c in MARKED:
            return (SAME, L, ("to_reg", MARKED[c]))
        if c != VIRGIN:
            return (SAME, R, ms)
    elif kind == "to_reg":
        if c == LM:
            return (SAME, L, ("scan_u", ms[1]))
        if c != VIRGIN:
            return (SAME, L, ms)
    elif kind == "scan_u":
        s = ms[1]
        if c == UM:
            return (SAME, L, ms)
        if c == U:
            return (UM, R, ("to_cursor", s, 3))
        if c == VIRGIN:
            return (SAME, R, ("to_cursor", s, 0))
    elif kind == "to_cursor":
        _, s, a = ms
        if c == SEPM:
            if a == 0 and s == 0:
                return (SAME, R, ("read_w",))
            if a == 0:
                return (SEP, R, ("advance", s, 0))
            return (SEP, R, ("advance", s, a))
        if c != VIRGIN:
            return (SAME, R, ms)
    elif kind == "advance":
        # a > 0: counting the register; a == 0: selecting by symbol s
        _, s, a = ms
        left = a if a else s
        if c == SEP:
            if left == 1:
                return (SEPM, L, ("to_reg", s)) if a else (SEPM, R, ("read_w",))
            return (SAME, R, ("advance", s, a - 1) if a else ("advance", s - 1, 0))
        if c in (S0, S1, SB, N):
            return (SAME, R, ms)
    elif kind == "read_w":
        if c in SIM_CHARS:
            return (SAME, R, ("read_m", c))
    elif kind == "read_m":
        if c in (S0, S1):
            return (SAME, R, ("read_n", ms[1], L if c == S0 else R))
    elif kind == "read_n":
        w, m = ms[1], ms[2]
        if c == N:
            return (NM, L, ("erase_go", w, m))
        if c in (SEP, MID):
            return (SAME, R, ("apply", w, m, True))
    elif kind == "erase_go":
        if c == LM:
            return (SAME, L, ("erase",) + ms[1:])
        if c != VIRGIN:
            return (SAME, L, ms)
    elif kind == "erase":
        if c in (U, UM):
            return (VIRGIN, L, ms)
        if c == VIRGIN:
            return (SAME, R, ("find_nm",) + ms[1:])
    elif kind == "find_nm":
        # starts left of the erased register, so virgin chars are crossed too
        if c == NM:
            return (SAME, R, ("skip_nm",) + ms[1:])
        return (SAME, R, ms)
    elif kind == "skip_nm":
        if c == NM:
            return (SAME, R, ms)
        if c == N:
            return (NM, L, ("add_go",) + ms[1:])
        if c in (SEP, MID):
            return (SAME, L, ("unmark_n",) + ms[1:])
    elif kind == "add_go":
        if c == LM:
            return (SAME, L, ("add",) + ms[1:])
        if c != VIRGIN:
            return (SAME, L, ms)
    elif kind == "add":
        if c == U:
            return (SAME, L, ms)
        if c == VIRGIN:
            return (U, R, ("find_nm",) + ms[1:])
    elif kind == "unmark_n":
        if c == NM:
            return (N, L, ms)
        if c in (S0, S1):
            return (SAME, R, ("apply", ms[1], ms[2], False))
    elif kind == "apply":
        _, w, m, h = ms
        if c in MARKED:
            return (w, m, ("mark", h))
        if c != VIRGIN:
            return (SAME, R, ms)
    elif kind == "mark":
        h = ms[1]
        nxt = ("out_start",) if h else ("commit",)
        if c in SIM_CHARS:
            return (HEAD_OF[c], L, nxt)
        if c == VIRGIN:
            return (HB, L, nxt)
        if c == MID:
            return (SAME, R, ("shift0", h))
    elif kind == "shift0":
        if c in SIM_CHARS:
            return (HB, R, ("shift", c, ms[1]))
    elif kind == "shift":
        _, carried, h = ms
        if c in SIM_CHARS:
            return (carried, R, ("shift", c, h))
        if c == VIRGIN:
            return (carried, L, ("out_start",) if h else ("commit",))
    elif kind == "commit":
        if c == SEPM:
            return (SEP, L, ms)
        if c == LM:
            return (SAME, R, ("remark",))
        if c != VIRGIN:
            return (SAME, L, ms)
    elif kind == "remark":
        if c == SEP:
            return (SEPM, R, ("find_head",))
    elif kind in ("out_start", "out_seek_l"):
        if c == MID:
            return (SAME, R, ("out_seek_r",))
        return (SAME, L, ("out_seek_l",))
    elif kind == "out_seek_r":
        if c in (H0, H1):
            return (S0 if c == H0 else S1, R, ("out_next", MARKED[c]))
        if c == HB:
            return (SB, R, ("out_done",))
        if c != VIRGIN:
            return (SAME, R, ms)
    elif kind == "out_next":
        b = ms[1]
        if c in SIM_CHARS:
            return (HEAD_OF[c], R, ("out_to_raw", b))
        if c == VIRGIN:
            return (SAME, R, ("raw_append", b, True))
    elif kind == "out_to_raw":
        if c == VIRGIN:
            return (SAME, R, ("raw_append", ms[1], False))
        return (SAME, R, ms)
    elif kind == "out_done":
        if c == VIRGIN:
            return (SAME, R, None)
        return (SAME, R, ms)
    return None


def _raw(ms, sym):
    """Single-cell transitions of the output phase: (write, move, next)."""
    kind = ms[0]
    if kind == "raw_append":
        _, b, last = ms
        if sym != BLANK:
            return (sym, R, ms)
        return (b, L, ("raw_home",) if last else ("raw_back",))
    if kind == "raw_back":
        if sym != BLANK:
            return (sym, L, ms)
        return (BLANK, L, ("X", L, ("out_seek_l",), 2))
    if kind == "raw_home":
        if sym != BLANK:
            return (sym, L, ms)
        return (BLANK, R, None)
    raise KeyError(ms)


def _is_raw(ms) -> bool:
    return ms is not None and ms[0].startswith("raw")


# -- compilation to cells --------------------------------------------------

def _bits(c: int) -> List[int]:
    if c == VIRGIN:
        return [BLANK] * CODE_WIDTH
    return [int(b) for b in format(c, f"0{CODE_WIDTH}b")]


def _entry(ms):
    if ms is None:
        return None
    if _is_raw(ms):
        return ("raw", ms)
    return ("R", ms, "")


def _chain(d: int, ns, k: int):
    return ("X", d, ns, k) if k > 0 else _entry(ns)


def _physical(key, sym) -> Tuple[int, int, Optional[tuple]]:
    """(write, move, next key) for physical state ``key`` reading ``sym``."""
    tag = key[0]
    if tag == "raw":
        w, mv, nxt = _raw(key[1], sym)
        if nxt is not None and nxt[0] == "X":
            return (w, mv, nxt)
        return (w, mv, _entry(nxt))
    if tag == "X":
        _, d, ns, k = key
        return (sym, d, _chain(d, ns, k - 1))
    if tag == "W":
        _, w, mv, ns, k = key
        if k > 0:
            return (_bits(w)[k], L, ("W", w, mv, ns, k - 1))
        return (_bits(w)[0], mv, _chain(mv, ns, 3))
    if tag == "F":
        _, w, mv, ns, k = key
        if k < 3:
            return (_bits(w)[k], R, ("F", w, mv, ns, k + 1))
        if mv == R:
            return (_bits(w)[3], R, _entry(ns))
        return (_bits(w)[3], L, _chain(L, ns, 6))
    _, ms, prefix = key
    if sym == BLANK:
        if prefix:
            return _ERROR
        found = _delta(ms, VIRGIN)
        if found is None:
            return _ERROR
        w, mv, ns = found
        if w in (SAME, VIRGIN):
            return (BLANK, mv, _chain(mv, ns, 3))
        return (_bits(w)[0], R, ("F", w, mv, ns, 1))
    if len(prefix) < 3:
        return (sym, R, ("R", ms, prefix + str(sym)))
    c = int(prefix + str(sym), 2)
    found = _delta(ms, c) if c < 14 else None
    if found is None:
        return _ERROR
    w, mv, ns = found
    if w in (SAME, c):
        if mv == R:
            return (sym, R, _entry(ns))
        return (sym, L, _chain(L, ns, 6))
    return (_bits(w)[3], L, ("W", w, mv, ns, 2))


# an undefined situation halts at once; faithful runs never reach it
_ERROR = (BLANK, R, None)

START = ("find_head",)
STEP_MARKERS = (("remark",), ("out_start",))


@lru_cache(maxsize=None)
def _build():
    ids: Dict[tuple, int] = {("R", START, ""): 0}
    order = [("R", START, "")]
    rows = []
    i = 0
    while i < len(order):
        key = order[i]
        row = []
        for sym in (0, 1, BLANK):
            w, mv, nxt = _physical(key, sym)
            if nxt is None:
                row.append((w, mv, HALT))
                continue
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
            row.append((w, mv, ids[nxt]))
        rows.extend(row)
        i += 1
    markers = frozenset(ids[_entry(m)] for m in STEP_MARKERS)
    return Machine(len(order), tuple(rows)), markers


def universal_machine() -> Machine:
    """The table of ``u``."""
    return _build()[0]


# -- pair encoding ---------------------------------------------------------

def _rule_chars(trans) -> List[int]:
    w, m, nx = trans
    out = [{0: S0, 1: S1, BLANK: SB}[w], S1 if m == R else S0]
    if nx != HALT:
        out += [N] * (nx + 1)
    return out


def encode_chars(e: int, x: str) -> List[int]:
    machine = decode_machine(e)
    if not isinstance(machine, Machine):
        raise ValueError(f"{e} is not a table machine; u simulates table machines only")
    _check_input(x)
    chars = [LM]
    for k, trans in enumerate(machine.table):
        chars.append(SEPM if k == 0 else SEP)
        chars += _rule_chars(trans)
    chars.append(MID)
    sim = [S0 if b == "0" else S1 for b in x] or [SB]
    sim[0] = HEAD_OF[sim[0]]
    return chars + sim


def encode_pair(e: int, x: str) -> str:
    """The input tape of ``u`` for ``(e, x)``."""
    return "".join("".join(str(b) for b in _bits(c)) for c in encode_chars(e, x))


def _run_counting(machine: Machine, markers, x: str, fuel: int):
    trans = [(w, 1 if m else -1, nx) for (w, m, nx) in machine.table]
    tape = Tape(x)
    cells = tape.cells
    head = tape.origin
    state = 0
    steps = 0
    marks = 0
    while steps < fuel:
        w, mv, nx = trans[3 * state + cells[head]]
        cells[head] = w
        head += mv
        steps += 1
        if head < 0 or head >= len(cells):
            head += tape.grow(head)
            cells = tape.cells
        if nx == HALT:
            return tape.output_from(head), marks, steps
        if nx in markers:
            marks += 1
        state = nx
    raise FuelExhausted(f"universal machine exceeded {fuel} steps")


def simulate_via_universal(e: int, x: str, fuel: int) -> Tuple[str, int, int]:
    """Run ``u`` on the pair encoding of ``(e, x)``.

    Returns ``(output, inner_steps, outer_steps)``; inner steps are counted
    as completed simulated transitions.
    """
    if fuel < 1:
        raise ValueError("fuel must be >= 1")
    machine, markers = _build()
    return _run_counting(machine, markers, encode_pair(e, x), fuel)


def overhead_bound(inner_steps: int, x: str, e: int) -> int:
    """``(inner_steps + |x| + |e|)^3``, the quantity the overhead is measured against."""
    return (inner_steps + len(x) + program_length(e)) ** 3
