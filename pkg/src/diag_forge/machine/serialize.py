"""Text and JSON forms of :class:`RunOutcome`.

Line format, one field per line::

    status halted
    output 110
    steps 9
    history
    conf 0 0 0 101
    ...
    end

``output`` is ``-`` when empty or absent. A configuration line is
``conf STATE HEAD OFFSET TAPE`` with ``-`` for an all-blank tape and ``-1``
for the HALT state; ``part`` opens a nested history and ``end`` closes the
innermost one.
"""

from __future__ import annotations

import json
from typing import List, Optional, Tuple

from .interpreter import ComputationHistory, Configuration, RunOutcome


class OutcomeFormatError(ValueError):
    pass


def _history_lines(h: ComputationHistory, out: List[str]) -> None:
    for c in h.configurations:
        out.append(f"conf {c.state} {c.head} {c.offset} {c.tape or '-'}")
    for p in h.parts:
        out.append("part")
        _history_lines(p, out)
        out.append("end")


def to_lines(o: RunOutcome) -> str:
    lines = [f"status {o.status}"]
    if o.halted:
        lines.append(f"output {o.output or '-'}")
        lines.append(f"steps {o.steps}")
    if o.history is not None:
        lines.append("history")
        _history_lines(o.history, lines)
        lines.append("end")
    return "\n".join(lines) + "\n"


def _parse_history(rows: List[str], i: int) -> Tuple[ComputationHistory, int]:
    confs, parts = [], []
    while i < len(rows):
        row = rows[i]
        if row == "end":
            return ComputationHistory(tuple(confs), tuple(parts)), i + 1
        if row == "part":
            sub, i = _parse_history(rows, i + 1)
            parts.append(sub)
            continue
        bits = row.split()
        if len(bits) != 5 or bits[0] != "conf":
            raise OutcomeFormatError(f"bad history line {row!r}")
        state, head, offset = (int(b) for b in bits[1:4])
        confs.append(Configuration(state, head, "" if bits[4] == "-" else bits[4], offset))
        i += 1
    raise OutcomeFormatError("unterminated history")


def from_lines(text: str) -> RunOutcome:
    rows = [r.strip() for r in text.splitlines() if r.strip()]
    fields = {}
    history: Optional[ComputationHistory] = None
    i = 0
    while i < len(rows):
        if rows[i] == "history":
            history, i = _parse_history(rows, i + 1)
            continue
        key, _, value = rows[i].partition(" ")
        fields[key] = value
        i += 1
    if "status" not in fields:
        raise OutcomeFormatError("missing status")
    output = fields.get("output")
    if output == "-":
        output = ""
    steps = int(fields["steps"]) if "steps" in fields else None
    return RunOutcome(fields["status"], output, steps, history)


def _history_obj(h: ComputationHistory) -> dict:
    return {
        "configurations": [[c.state, c.head, c.tape, c.offset] for c in h.configurations],
        "parts": [_history_obj(p) for p in h.parts],
    }


def _history_from(obj: dict) -> ComputationHistory:
    return ComputationHistory(
        tuple(Configuration(*c) for c in obj["configurations"]),
        tuple(_history_from(p) for p in obj["parts"]),
    )


def to_record(o: RunOutcome) -> dict:
    return {
        "status": o.status,
        "output": o.output,
        "steps": o.steps,
        "history": None if o.history is None else _history_obj(o.history),
    }


def to_json(o: RunOutcome) -> str:
    return json.dumps(to_record(o), sort_keys=True) + "\n"


def from_json(text: str) -> RunOutcome:
    obj = json.loads(text)
    hist = obj.get("history")
    return RunOutcome(obj["status"], obj.get("output"), obj.get("steps"), None if hist is None else _history_from(hist))
