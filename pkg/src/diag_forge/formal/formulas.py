"""Formulas of the miniature axiomatic system.

Grammar (decimal indices, no whitespace inside a formula is required but
spaces after commas are tolerated)::

    formula := atom | "Not(" atom ")"
    atom    := "Total(" nat ")" | "InTime(" nat "," nat ")" | "ExistsClass(" nat ")"
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..machine.codec import pair, unpair


@dataclass(frozen=True)
class Total:
    e: int

    def __str__(self):
        return f"Total({self.e})"


@dataclass(frozen=True)
class InTime:
    e: int
    b: int

    def __str__(self):
        return f"InTime({self.e},{self.b})"


@dataclass(frozen=True)
class ExistsClass:
    e: int

    def __str__(self):
        return f"ExistsClass({self.e})"


@dataclass(frozen=True)
class Not:
    inner: "Atom"

    def __post_init__(self):
        if isinstance(self.inner, Not):
            raise ValueError("Not may only appear at the top level")

    def __str__(self):
        return f"Not({self.inner})"


Atom = Union[Total, InTime, ExistsClass]
Formula = Union[Total, InTime, ExistsClass, Not]


class FormulaSyntaxError(ValueError):
    def __init__(self, column: int, message: str):
        self.column = column
        super().__init__(f"column {column}: {message}")


def render_formula(f: Formula) -> str:
    return str(f)


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, message: str):
        raise FormulaSyntaxError(self.pos + 1, message)

    def skip_spaces(self):
        while self.pos < len(self.text) and self.text[self.pos] == " ":
            self.pos += 1

    def expect(self, token: str):
        if not self.text.startswith(token, self.pos):
            got = self.text[self.pos:self.pos + 1] or "end of input"
            self.fail(f"expected {token!r}, got {got!r}")
        self.pos += len(token)

    def name(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        if start == self.pos:
            self.fail("expected a formula name")
        return self.text[start:self.pos]

    def nat(self) -> int:
        self.skip_spaces()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected a natural number")
        return int(self.text[start:self.pos])

    def formula(self, top: bool) -> Formula:
        start = self.pos
        head = self.name()
        self.expect("(")
        if head == "Not":
            if not top:
                self.pos = start
                self.fail("Not may only appear at the top level")
            inner = self.formula(top=False)
            self.expect(")")
            return Not(inner)
        if head == "Total":
            e = self.nat()
            self.expect(")")
            return Total(e)
        if head == "ExistsClass":
            e = self.nat()
            self.expect(")")
            return ExistsClass(e)
        if head == "InTime":
            e = self.nat()
            self.expect(",")
            b = self.nat()
            self.expect(")")
            return InTime(e, b)
        self.pos = start
        self.fail(f"unknown formula {head!r}")


def parse_formula(text: str) -> Formula:
    reader = _Reader(text.strip())
    f = reader.formula(top=True)
    if reader.pos != len(reader.text):
        reader.fail("trailing characters")
    return f


# -- numbering -------------------------------------------------------------

def _atom_code(a: Atom) -> int:
    if isinstance(a, Total):
        return 3 * a.e
    if isinstance(a, ExistsClass):
        return 3 * a.e + 1
    return 3 * pair(a.e, a.b) + 2


def _atom_from(code: int) -> Atom:
    j, kind = divmod(code, 3)
    if kind == 0:
        return Total(j)
    if kind == 1:
        return ExistsClass(j)
    return InTime(*unpair(j))


def formula_code(f: Formula) -> int:
    """Bijection from formulas to naturals."""
    if isinstance(f, Not):
        return 2 * _atom_code(f.inner) + 1
    return 2 * _atom_code(f)


def formula_from_code(code: int) -> Formula:
    atom, neg = divmod(code, 2)
    a = _atom_from(atom)
    return Not(a) if neg else a
