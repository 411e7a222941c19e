"""Canonical numbering of programs.

Layout of the index space::

    0 .. 1727                     1-state tables, in table rank order
    1728 + 4*j + 0                table of rank 1728 + j (2 or more states)
    1728 + 4*j + 1                Composition(unpair(j))
    1728 + 4*j + 2                Timer(j)
    1728 + 4*j + 3                Diagonalizer(theory code j)

Tables are ranked by state count, then by a mixed-radix reading of the
transition table. Cells are ordered ``(q0,0) (q0,1) (q0,_) (q1,0) ...``,
most significant first, and each cell is one digit in ``[0, 6(k+1))``::

    digit = (next_code * 3 + write_code) * 2 + move

with ``next_code`` 0 for HALT and ``q + 1`` for state ``q``, and
``write_code`` 0, 1, 2 for ``_``, ``0``, ``1``. Digit 0 is therefore
"write blank, move left, halt", so index 0 halts at once on every symbol.

Every natural number decodes to exactly one program and ``encode`` is the
exact inverse of ``decode``.
"""

from __future__ import annotations

from math import isqrt
from typing import List, Sequence, Tuple

from .model import (
    HALT,
    Composition,
    Diagonalizer,
    Machine,
    MachineError,
    Program,
    Timer,
)

ONE_STATE_BLOCK = 12 ** 3
STREAMS = 4
TAG_TABLE, TAG_COMPOSE, TAG_TIMER, TAG_DIAG = range(STREAMS)


# -- pairing ---------------------------------------------------------------

def pair(a: int, b: int) -> int:
    """Cantor pairing; a bijection N x N -> N with pair(a, b) >= max(a, b)."""
    s = a + b
    return s * (s + 1) // 2 + b


def unpair(n: int) -> Tuple[int, int]:
    w = (isqrt(8 * n + 1) - 1) // 2
    b = n - w * (w + 1) // 2
    return w - b, b


def encode_list(items: Sequence[int]) -> int:
    """Bijection N* -> N: [] -> 0, [h, *t] -> 1 + pair(h, code(t))."""
    code = 0
    for item in reversed(items):
        code = 1 + pair(item, code)
    return code


def decode_list(code: int) -> List[int]:
    out = []
    while code:
        head, code = unpair(code - 1)
        out.append(head)
    return out


# -- tables ----------------------------------------------------------------

def block_size(k: int) -> int:
    return (6 * (k + 1)) ** (3 * k)


def _cell_digit(trans) -> int:
    w, m, nx = trans
    next_code = 0 if nx == HALT else nx + 1
    write_code = (w + 1) % 3
    return (next_code * 3 + write_code) * 2 + m


def _digit_cell(d: int):
    m = d % 2
    d //= 2
    write_code = d % 3
    next_code = d // 3
    w = (write_code + 2) % 3
    return (w, m, HALT if next_code == 0 else next_code - 1)


def table_rank(machine: Machine) -> int:
    k = machine.n_states
    radix = 6 * (k + 1)
    local = 0
    for trans in machine.table:
        local = local * radix + _cell_digit(trans)
    return sum(block_size(j) for j in range(1, k)) + local


def table_from_rank(rank: int) -> Machine:
    if rank < 0:
        raise ValueError("rank must be non-negative")
    k = 1
    while rank >= block_size(k):
        rank -= block_size(k)
        k += 1
    radix = 6 * (k + 1)
    digits = []
    for _ in range(3 * k):
        rank, d = divmod(rank, radix)
        digits.append(d)
    digits.reverse()
    return Machine(k, tuple(_digit_cell(d) for d in digits))


# -- programs --------------------------------------------------------------

def _index_from(tag: int, j: int) -> int:
    return ONE_STATE_BLOCK + STREAMS * j + tag


def decode_machine(index: int) -> Program:
    """The unique program at ``index``; total on the naturals."""
    if index < 0:
        raise ValueError("machine indices are natural numbers")
    if index < ONE_STATE_BLOCK:
        return table_from_rank(index)
    j, tag = divmod(index - ONE_STATE_BLOCK, STREAMS)
    if tag == TAG_TABLE:
        return table_from_rank(ONE_STATE_BLOCK + j)
    if tag == TAG_COMPOSE:
        return Composition(*unpair(j))
    if tag == TAG_TIMER:
        return Timer(j)
    return Diagonalizer(j)


def encode_machine(program: Program) -> int:
    if isinstance(program, Machine):
        rank = table_rank(program)
        if rank < ONE_STATE_BLOCK:
            return rank
        return _index_from(TAG_TABLE, rank - ONE_STATE_BLOCK)
    if isinstance(program, Composition):
        return _index_from(TAG_COMPOSE, pair(program.first, program.second))
    if isinstance(program, Timer):
        return _index_from(TAG_TIMER, program.target)
    if isinstance(program, Diagonalizer):
        return _index_from(TAG_DIAG, program.theory_code)
    raise MachineError(f"cannot encode {program!r}")


def compose(e1: int, e2: int) -> int:
    """Index of the program computing ``x -> {e2}({e1}(x))``."""
    return encode_machine(Composition(e1, e2))


def t_index(e: int) -> int:
    """Index of the time emulator for ``e``."""
    return encode_machine(Timer(e))


def diagonalizer_code_index(theory_code: int) -> int:
    return encode_machine(Diagonalizer(theory_code))


def index_tag(index: int) -> int:
    if index < ONE_STATE_BLOCK:
        return TAG_TABLE
    return (index - ONE_STATE_BLOCK) % STREAMS


def is_composition_tagged(index: int) -> bool:
    return index_tag(index) == TAG_COMPOSE


def is_timer_tagged(index: int) -> bool:
    return index_tag(index) == TAG_TIMER


def is_diagonalizer_tagged(index: int) -> bool:
    return index_tag(index) == TAG_DIAG


def program_length(index: int) -> int:
    """Encoded program length in bits: indices of length <= N are 0 .. 2^N - 2."""
    return (index + 1).bit_length()


__all__ = [
    "ONE_STATE_BLOCK",
    "block_size",
    "compose",
    "decode_list",
    "decode_machine",
    "diagonalizer_code_index",
    "encode_list",
    "encode_machine",
    "index_tag",
    "is_composition_tagged",
    "is_diagonalizer_tagged",
    "is_timer_tagged",
    "pair",
    "program_length",
    "t_index",
    "table_from_rank",
    "table_rank",
    "unpair",
]
