"""Hand-written machines: the base catalogue and the bound-machine builders.

Every machine leaves its result as the non-blank run starting under the
head, per the model's output convention.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, List

from .codec import compose, encode_machine
from .dsl import parse_machine
from .model import Machine

HALT_TEXT = """\
# halts at once; output is empty
start h
h 0 -> _ L HALT
h 1 -> _ L HALT
h _ -> _ L HALT
"""

IDENTITY_TEXT = """\
start s
s 0 -> 0 L park
s 1 -> 1 L park
s _ -> _ R HALT
park _ -> _ R HALT
park 0 -> 0 R HALT
park 1 -> 1 R HALT
"""

SUCC_TEXT = """\
# binary increment, most significant bit first
start right
right 0 -> 0 R right
right 1 -> 1 R right
right _ -> _ L carry
carry 1 -> 0 L carry
carry 0 -> 1 L back
carry _ -> 1 L back
back 0 -> 0 L back
back 1 -> 1 L back
back _ -> _ R HALT
"""

DOUBLE_TEXT = """\
# append a 0
start right
right 0 -> 0 R right
right 1 -> 1 R right
right _ -> 0 L back
back 0 -> 0 L back
back 1 -> 1 L back
back _ -> _ R HALT
"""

ZERO_TEXT = """\
# erase the input, leave a single 0
start wipe
wipe 0 -> _ R wipe
wipe 1 -> _ R wipe
wipe _ -> 0 L park
park _ -> _ R HALT
park 0 -> 0 R HALT
park 1 -> 1 R HALT
"""

ONE_TEXT = ZERO_TEXT.replace("wipe _ -> 0", "wipe _ -> 1").replace("single 0", "single 1")

LOOP_TEXT = """\
# shuttles between two cells forever
start a
a 0 -> 0 R b
a 1 -> 1 R b
a _ -> _ R b
b 0 -> 0 L a
b 1 -> 1 L a
b _ -> _ L a
"""

BASE_TEXTS: Dict[str, str] = {
    "halt": HALT_TEXT,
    "identity": IDENTITY_TEXT,
    "succ": SUCC_TEXT,
    "double": DOUBLE_TEXT,
    "zero": ZERO_TEXT,
}

# order matters: it fixes the order of the base axioms
BASE_NAMES = tuple(BASE_TEXTS)


def _rules(state: str, spec: Dict[str, str]) -> List[str]:
    out = []
    for sym in "01_":
        out.append(f"{state} {sym} -> {spec.get(sym, spec.get('*', sym + ' R HALT'))}")
    return out


def _same(move: str, target: str) -> Dict[str, str]:
    return {s: f"{s} {move} {target}" for s in "01_"}


def pow_len_text(j: int, a: int) -> str:
    """Machine text for ``m -> 2^(j*|(m)_2| + a)``."""
    if j < 1 or a < 0:
        raise ValueError("need j >= 1 and a >= 0")
    lines = ["start mark"]
    mark = {"0": "1 R mark", "1": "1 R mark"}
    mark["_"] = "0 R pad2" if a > 1 else ("0 L rewind" if a == 1 else "_ L rewind")
    lines += _rules("mark", mark)
    for i in range(2, a + 1):
        nxt = f"0 R pad{i + 1}" if i < a else "0 L rewind"
        lines += _rules(f"pad{i}", {"_": nxt})
    lines += _rules("rewind", {"0": "0 L rewind", "1": "1 L rewind", "_": "_ R take"})
    lines += _rules("take", {"1": "_ R emit1", "0": "0 L put1", "_": "1 L fin"})
    for i in range(1, j + 1):
        tail = f"0 R emit{i + 1}" if i < j else "0 L rewind"
        if i == 1:
            lines += _rules("emit1", {"0": "0 R emit1", "1": "1 R emit1", "_": tail})
        else:
            lines += _rules(f"emit{i}", {"_": tail})
    lines += _rules("put1", {"_": "1 L fin"})
    lines += _rules("fin", {"_": "_ R HALT"})
    return "\n".join(lines) + "\n"


def exp_text(b: int) -> str:
    """Machine text for ``m -> 2^(m + b)``."""
    if b < 0:
        raise ValueError("need b >= 0")
    lines = ["start init"]
    lines += _rules("init", _same("L", "pre"))
    lines += _rules("pre", {"_": "_ L pad1" if b else "_ R scan"})
    for i in range(1, b + 1):
        lines += _rules(f"pad{i}", {"_": f"0 L pad{i + 1}" if i < b else "0 R sep"})
    lines += _rules("sep", {"0": "0 R sep", "_": "_ R scan"})
    lines += _rules("scan", {"0": "0 R scan", "1": "1 R scan", "_": "_ L dec"})
    lines += _rules("dec", {"0": "1 L dec", "1": "0 L ret", "_": "_ L finz"})
    lines += _rules("ret", {"0": "0 L ret", "1": "1 L ret", "_": "_ L addz"})
    lines += _rules("addz", {"0": "0 L addz", "_": "0 R sep"})
    lines += _rules("finz", {"0": "0 L finz", "_": "1 L fin"})
    lines += _rules("fin", {"_": "_ R HALT"})
    return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def machine(name: str) -> Machine:
    texts = dict(BASE_TEXTS, one=ONE_TEXT, loop=LOOP_TEXT)
    return parse_machine(texts[name])


@lru_cache(maxsize=None)
def index_of(name: str) -> int:
    return encode_machine(machine(name))


def base_indices() -> Dict[str, int]:
    return {name: index_of(name) for name in BASE_NAMES}


@lru_cache(maxsize=None)
def pow_len_index(j: int, a: int) -> int:
    return encode_machine(parse_machine(pow_len_text(j, a)))


@lru_cache(maxsize=None)
def exp_index(b: int) -> int:
    return encode_machine(parse_machine(exp_text(b)))


def hyperexp_index(depth: int, b: int) -> int:
    """``m -> 2^(2^(...2^m) + b)`` with ``depth`` exponentials."""
    if depth < 1:
        raise ValueError("depth >= 1")
    e = exp_index(b)
    for _ in range(depth - 1):
        e = compose(exp_index(0), e)
    return e


# -- bound catalogue ---------------------------------------------------------
# Constants are pinned so that, for every m <= 8,
#   linear <= quadratic <= cubic <= exp <= hyperexp
# holds pointwise (cubic(8) = 2^14 needs exp's +7).

BOUND_NAMES = ("linear", "quadratic", "cubic", "exp", "hyperexp")
BOUND_PAD = 2
EXP_PAD = 7


def bound_index(name: str) -> int:
    if name == "const1":
        return index_of("one")
    if name == "linear":
        return pow_len_index(1, BOUND_PAD)
    if name == "quadratic":
        return pow_len_index(2, BOUND_PAD)
    if name == "cubic":
        return pow_len_index(3, BOUND_PAD)
    if name.startswith("poly"):
        return pow_len_index(int(name[4:]), BOUND_PAD)
    if name == "exp":
        return exp_index(EXP_PAD)
    if name == "hyperexp":
        return hyperexp_index(2, EXP_PAD)
    if name.startswith("hyperexp"):
        return hyperexp_index(int(name[8:]), EXP_PAD)
    raise KeyError(f"unknown bound {name!r}")


@lru_cache(maxsize=None)
def bound_catalogue_indices():
    return tuple(bound_index(name) for name in BOUND_NAMES)
