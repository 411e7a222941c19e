"""Exhaustive Busy Beaver search over short program indices.

Every index with ``program_length(e) <= N`` is run on the empty input and
classified as halted, proven looping, or undecided. A loop proof is a
certificate naming a table-machine sub-run and two times ``i < j``:

``repeat``
    the configurations at ``i`` and ``j`` agree up to a shift of the whole
    tape (state, head offset and non-blank contents); an unshifted repeat is
    the special case of shift zero.
``record-R`` / ``record-L``
    ``i`` and ``j`` are times at which the head stands on a fresh cell beyond
    everything visited, in the same state; the tape window the run touched
    between ``i`` and ``j`` reads the same at both times, so the segment
    repeats forever, drifting outward.

Compositions and timers inherit the certificate of the sub-run that loops.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .machine.codec import decode_machine, program_length
from .machine.interpreter import run, timer_cost
from .machine.model import BLANK, Composition, Diagonalizer, Machine, Timer, char_symbol, from_bits, to_bits

BB_CAP = 16


class CapExceeded(ValueError):
    pass


class Inconclusive(RuntimeError):
    pass


@dataclass(frozen=True)
class LoopCertificate:
    machine: int
    input: str
    kind: str
    i: int
    j: int

    def record(self) -> dict:
        return {"machine": str(self.machine), "input": self.input, "kind": self.kind, "i": self.i, "j": self.j}


@dataclass
class BBReport:
    N: int
    fuel: int
    lower_bound: int = 0
    witnesses: List[Tuple[int, int, int]] = field(default_factory=list)
    halted: int = 0
    looping: int = 0
    undecided: int = 0
    undecided_indices: List[int] = field(default_factory=list)
    certificates: Dict[int, LoopCertificate] = field(default_factory=dict)

    @property
    def fuel_used(self) -> int:
        return self.fuel

    @property
    def exact(self) -> bool:
        return self.undecided == 0


# -- table-machine decider -------------------------------------------------

HALTS, LOOPS, UNKNOWN = "halts", "loops", "unknown"


def _window(tape: Dict[int, int], lo: int, hi: int) -> Tuple[int, ...]:
    return tuple(tape.get(p, BLANK) for p in range(lo, hi + 1))


def _shape(state: int, head: int, tape: Dict[int, int]):
    live = [p for p, s in tape.items() if s != BLANK]
    if not live:
        return (state, None, ())
    lo, hi = min(live), max(live)
    return (state, head - lo, _window(tape, lo, hi))


class _Trace:
    """Step-by-step run of a table machine with the data certificates need."""

    def __init__(self, machine: Machine, x: str):
        self.machine = machine
        self.x = x
        self.tape = {i: char_symbol(c) for i, c in enumerate(x)}
        self.state = 0
        self.head = 0
        self.t = 0
        self.heads = [0]
        self.hi_seen = max(0, len(x) - 1)
        self.lo_seen = 0

    def step(self) -> bool:
        """Advance one transition; True when the machine halts."""
        w, m, nx = self.machine.transition(self.state, self.tape.get(self.head, BLANK))
        self.tape[self.head] = w
        self.head += 1 if m else -1
        self.t += 1
        self.heads.append(self.head)
        if nx < 0:
            return True
        self.state = nx
        return False

    def output(self) -> str:
        out = []
        p = self.head
        while self.tape.get(p, BLANK) != BLANK:
            out.append("1" if self.tape[p] else "0")
            p += 1
        return "".join(out)


def _record_side(tr: _Trace) -> Optional[str]:
    """'R'/'L' when the head has just reached a fresh cell past all others."""
    side = None
    if tr.head > tr.hi_seen:
        side = "R"
        tr.hi_seen = tr.head
    elif tr.head < tr.lo_seen:
        side = "L"
        tr.lo_seen = tr.head
    return side


def _records_match(tr, snaps, i: int, j: int, side: str) -> bool:
    (_, hi_, tape_i), (_, hj, tape_j) = snaps[i], snaps[j]
    seg = tr.heads[i:j + 1]
    if side == "R":
        a = hi_ - min(seg)
        return _window(tape_i, hi_ - a, hi_) == _window(tape_j, hj - a, hj)
    a = max(seg) - hi_
    return _window(tape_i, hi_, hi_ + a) == _window(tape_j, hj, hj + a)


def decide_table(machine: Machine, x: str, fuel: int):
    """``(HALTS, output, steps)``, ``(LOOPS, (kind, i, j))`` or ``(UNKNOWN,)``."""
    tr = _Trace(machine, x)
    seen = {_shape(0, 0, tr.tape): 0}
    snaps = {}
    records: Dict[Tuple[str, int], List[int]] = {}
    while tr.t < fuel:
        if tr.step():
            return (HALTS, tr.output(), tr.t)
        key = _shape(tr.state, tr.head, tr.tape)
        if key in seen:
            return (LOOPS, ("repeat", seen[key], tr.t))
        seen[key] = tr.t
        side = _record_side(tr)
        if side is None:
            continue
        snaps[tr.t] = (tr.state, tr.head, dict(tr.tape))
        earlier = records.setdefault((side, tr.state), [])
        for i in earlier:
            if _records_match(tr, snaps, i, tr.t, side):
                return (LOOPS, ("record-" + side, i, tr.t))
        earlier.append(tr.t)
    return (UNKNOWN,)


def verify_certificate(cert: LoopCertificate) -> bool:
    """Replay the certified sub-run and re-check the repeat condition."""
    machine = decode_machine(cert.machine)
    if not isinstance(machine, Machine) or not 0 <= cert.i < cert.j:
        return False
    tr = _Trace(machine, cert.input)
    shapes = {0: _shape(0, 0, tr.tape)}
    snaps = {0: (0, 0, dict(tr.tape))}
    sides = {}
    while tr.t < cert.j:
        if tr.step():
            return False
        side = _record_side(tr)
        if tr.t in (cert.i, cert.j):
            shapes[tr.t] = _shape(tr.state, tr.head, tr.tape)
            snaps[tr.t] = (tr.state, tr.head, dict(tr.tape))
            sides[tr.t] = side
    if cert.kind == "repeat":
        return shapes[cert.i] == shapes[cert.j]
    if cert.kind in ("record-R", "record-L"):
        side = cert.kind[-1]
        if sides.get(cert.i) != side or sides.get(cert.j) != side:
            return False
        if snaps[cert.i][0] != snaps[cert.j][0]:
            return False
        return _records_match(tr, snaps, cert.i, cert.j, side)
    return False


# -- programs --------------------------------------------------------------

def decide(index: int, x: str, fuel: int):
    """Classify program ``index`` on ``x`` within ``fuel`` total steps.

    Returns ``(HALTS, output, steps)``, ``(LOOPS, LoopCertificate)`` or
    ``(UNKNOWN,)``.
    """
    prog = decode_machine(index)
    if isinstance(prog, Machine):
        res = decide_table(prog, x, fuel)
        if res[0] == LOOPS:
            kind, i, j = res[1]
            return (LOOPS, LoopCertificate(index, x, kind, i, j))
        return res
    if isinstance(prog, Composition):
        first = decide(prog.first, x, fuel)
        if first[0] != HALTS:
            return first
        if first[2] >= fuel:
            return (UNKNOWN,)
        second = decide(prog.second, first[1], fuel - first[2])
        if second[0] != HALTS:
            return second
        return (HALTS, second[1], first[2] + second[2])
    if isinstance(prog, Timer):
        inner = decide(prog.target, x, fuel)
        if inner[0] != HALTS:
            return inner
        if timer_cost(inner[2]) > fuel:
            return (UNKNOWN,)
        return (HALTS, to_bits(inner[2]), timer_cost(inner[2]))
    if isinstance(prog, Diagonalizer):
        out = run(index, x, fuel)
        return (HALTS, out.output, out.steps) if out.halted else (UNKNOWN,)
    raise TypeError(f"not a program: {prog!r}")


def candidates(N: int) -> range:
    """Indices whose encoding is at most ``N`` bits long."""
    return range(0, 2 ** N - 1)


def _search_range(lo: int, hi: int, fuel: int):
    part = BBReport(0, fuel)
    for e in range(lo, hi):
        res = decide(e, "", fuel)
        if res[0] == HALTS:
            part.halted += 1
            v = from_bits(res[1])
            if not part.witnesses or v > part.lower_bound:
                part.lower_bound, part.witnesses = v, []
            if v == part.lower_bound:
                part.witnesses.append((e, v, res[2]))
        elif res[0] == LOOPS:
            part.looping += 1
            part.certificates[e] = res[1]
        else:
            part.undecided += 1
            part.undecided_indices.append(e)
    return part


def bb_search(N: int, fuel: int, jobs: int = 1) -> BBReport:
    if N < 0:
        raise ValueError("N must be >= 0")
    if fuel < 1:
        raise ValueError("fuel must be >= 1")
    if N > BB_CAP:
        raise CapExceeded(f"N={N} is above the enumeration cap {BB_CAP}")
    space = candidates(N)
    if jobs <= 1 or len(space) < 256:
        parts = [_search_range(space.start, space.stop, fuel)]
    else:
        step = -(-len(space) // jobs)
        bounds = [(lo, min(lo + step, space.stop)) for lo in range(0, space.stop, step)]
        with ProcessPoolExecutor(jobs) as pool:
            parts = list(pool.map(_search_range, *zip(*bounds), [fuel] * len(bounds)))
    report = BBReport(N, fuel)
    for p in parts:
        report.halted += p.halted
        report.looping += p.looping
        report.undecided += p.undecided
        report.undecided_indices += p.undecided_indices
        report.certificates.update(p.certificates)
        if not p.witnesses:
            continue
        if p.lower_bound > report.lower_bound or not report.witnesses:
            report.lower_bound = p.lower_bound
            report.witnesses = list(p.witnesses)
        elif p.lower_bound == report.lower_bound:
            report.witnesses += p.witnesses
    return report


def bb_scalability_check(N: int, fuel: int, report: Optional[BBReport] = None) -> bool:
    """True when a witness of length <= N outputs exactly the bound."""
    report = report or bb_search(N, fuel)
    if report.undecided:
        raise Inconclusive(f"{report.undecided} machines undecided at N={N}, fuel={fuel}")
    if not report.witnesses:
        # nothing halts, so BB(N) is the empty maximum 0 and no program attains it
        return False
    for e, _, _ in report.witnesses:
        out = run(e, "", fuel)
        if program_length(e) <= N and out.halted and out.value == report.lower_bound:
            return True
    return False


# -- rendering -------------------------------------------------------------

def render_report(report: BBReport, max_witnesses: int = 10) -> str:
    lines = [
        f"N\t{report.N}",
        f"fuel\t{report.fuel}",
        f"lower_bound\t{report.lower_bound}",
        f"exact\t{'yes' if report.exact else 'no'}",
        f"halted\t{report.halted}",
        f"looping\t{report.looping}",
        f"undecided\t{report.undecided}",
        f"witnesses\t{len(report.witnesses)}",
        "index\tvalue\tsteps",
    ]
    for e, v, s in report.witnesses[:max_witnesses]:
        lines.append(f"{e}\t{v}\t{s}")
    if len(report.witnesses) > max_witnesses:
        lines.append(f"... {len(report.witnesses) - max_witnesses} more")
    return "\n".join(lines) + "\n"


def report_record(report: BBReport) -> dict:
    return {
        "N": report.N,
        "fuel": report.fuel,
        "lower_bound": str(report.lower_bound),
        "exact": report.exact,
        "halted": report.halted,
        "looping": report.looping,
        "undecided": report.undecided,
        "witnesses": [[str(e), str(v), s] for e, v, s in report.witnesses],
    }


def render_certificates(report: BBReport) -> str:
    """Sidecar: one JSON object per line, keyed by program index."""
    return "".join(json.dumps({"index": str(e), **c.record()}) + "\n" for e, c in sorted(report.certificates.items()))
