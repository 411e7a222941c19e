"""Command-line front end: ``diag-forge SUBCOMMAND [options]``.

Exit status is 0 on success, 1 on a domain error (including a
counterexample under ``classify --assert``) and 2 on a usage error.
Fuel comes from ``--fuel``, else ``DIAG_FORGE_FUEL_DEFAULT``, else the
built-in default.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import List, Optional

from . import busy_beaver, complexity, diagonal
from .formal import proofs
from .formal.theory import TheoryError, base_theory, load_theory
from .machine import catalogue, serialize
from .machine.codec import decode_machine, encode_machine
from .machine.dsl import DSLError, load_machine
from .machine.interpreter import run
from .machine.model import Machine


class UsageError(Exception):
    pass


def _nat(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text!r}")
    return value


def _pos(text: str) -> int:
    value = _nat(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _binary(text: str) -> str:
    if any(c not in "01" for c in text):
        raise argparse.ArgumentTypeError(f"expected a binary string, got {text!r}")
    return text


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="diag-forge", description="Diagonalization laboratory.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def common(sp, fuel=True):
        if fuel:
            sp.add_argument("--fuel", type=_pos, help="step budget (default: env DIAG_FORGE_FUEL_DEFAULT, else 10^6)")
        sp.add_argument("--format", choices=("table", "structured"), default="table")
        sp.add_argument("--timing", action="store_true", help="append wall-clock time")
        sp.add_argument("--jobs", type=_pos, default=1)

    sp = sub.add_parser("run", help="run a machine on an input")
    sp.add_argument("--machine", required=True, help="DSL file, catalogue name or index")
    sp.add_argument("--input", type=_binary, default="")
    sp.add_argument("--history", action="store_true")
    common(sp)

    sp = sub.add_parser("encode", help="machine file or name to index, or index to DSL")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--machine")
    g.add_argument("--index", type=_nat)
    common(sp, fuel=False)

    sp = sub.add_parser("theorems", help="list the first n canonical proofs")
    sp.add_argument("--theory")
    sp.add_argument("--level", type=_nat)
    sp.add_argument("--n", type=_nat, required=True)
    sp.add_argument("--proofs", action="store_true", help="print every proof in full")
    common(sp, fuel=False)

    sp = sub.add_parser("diagonal", help="the dominance row F(n)")
    sp.add_argument("--theory")
    sp.add_argument("--level", type=_nat)
    sp.add_argument("--n", type=_nat, required=True)
    sp.add_argument("--table", action="store_true", help="rows for 0..n")
    common(sp)

    sp = sub.add_parser("hierarchy", help="diagonalizer indices and values per level")
    sp.add_argument("--level", type=_nat, required=True)
    sp.add_argument("--n", type=_nat, required=True)
    common(sp)

    sp = sub.add_parser("classify", help="check a time bound on inputs 0..n")
    sp.add_argument("--machine", required=True)
    sp.add_argument("--bound", required=True, help="catalogue bound name or DSL file")
    sp.add_argument("--n", type=_nat, required=True)
    sp.add_argument("--assert", dest="assert_", action="store_true", help="exit 1 on a counterexample")
    common(sp)

    sp = sub.add_parser("bb", help="Busy Beaver search over programs of length <= n")
    sp.add_argument("--n", type=_nat, required=True)
    sp.add_argument("--certificates", help="write loop certificates to this file")
    common(sp)

    sp = sub.add_parser("report", help="growth report over levels 0..level")
    sp.add_argument("--level", type=_nat, required=True)
    sp.add_argument("--n", type=_nat, required=True)
    common(sp)
    return p


# -- resolution helpers ----------------------------------------------------

def _fuel(args) -> int:
    if args.fuel is not None:
        return args.fuel
    try:
        return diagonal.default_fuel()
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _machine(ref: str) -> int:
    if os.path.exists(ref):
        return encode_machine(load_machine(ref))
    if ref.isdigit():
        return int(ref)
    try:
        return catalogue.index_of(ref)
    except KeyError:
        raise UsageError(f"no machine file, index or catalogue name {ref!r}") from None


def _bound(ref: str) -> int:
    if os.path.exists(ref):
        return encode_machine(load_machine(ref))
    try:
        return catalogue.bound_index(ref)
    except (KeyError, ValueError):
        raise UsageError(f"unknown bound {ref!r}") from None


def _theory(args):
    if args.theory is not None and args.level is not None:
        raise UsageError("--theory and --level are exclusive")
    if args.theory is not None:
        return load_theory(args.theory)
    if args.level is not None:
        return diagonal.build_hierarchy(args.level)[args.level][0]
    return base_theory()


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# -- subcommands -----------------------------------------------------------

def cmd_run(args, out):
    e = _machine(args.machine)
    outcome = run(e, args.input, _fuel(args), want_history=args.history)
    out.write(serialize.to_json(outcome) if args.format == "structured" else serialize.to_lines(outcome))
    return 0


def cmd_encode(args, out):
    if args.machine is not None:
        e = _machine(args.machine)
        out.write(_dump({"index": str(e)}) if args.format == "structured" else f"{e}\n")
        return 0
    prog = decode_machine(args.index)
    text = prog.describe() if isinstance(prog, Machine) else f"{prog}\n"
    if args.format == "structured":
        out.write(_dump({"index": str(args.index), "program": text}))
    else:
        out.write(text if text.endswith("\n") else text + "\n")
    return 0


def cmd_theorems(args, out):
    t = _theory(args)
    ps = proofs.enumerate_proofs(t, args.n)
    if args.format == "structured":
        out.write(_dump([{"index": p.index, "conclusion": str(p.conclusion), "proof": p.render()} for p in ps]))
        return 0
    if args.proofs:
        for p in ps:
            out.write(f"# proof {p.index}\n{p.render()}")
        return 0
    out.write("index\tsteps\tconclusion\n")
    for p in ps:
        out.write(f"{p.index}\t{len(p.steps)}\t{p.conclusion}\n")
    return 0


def cmd_diagonal(args, out):
    t = _theory(args)
    fuel = _fuel(args)
    rows = diagonal.dominance_table(t, args.n, fuel) if args.table else [diagonal.compute_F(t, args.n, fuel)]
    if args.format == "structured":
        out.write(diagonal.render_rows_structured(rows))
    else:
        out.write(diagonal.render_rows_tsv(rows))
    return 0


def cmd_hierarchy(args, out):
    fuel = _fuel(args)
    levels = diagonal.build_hierarchy(args.level)
    records = []
    for t, h in levels:
        values = [diagonal.compute_F(t, n, fuel).F_value for n in range(args.n + 1)]
        records.append({"level": h.level, "index": str(h.index), "F": [str(v) for v in values]})
    if args.format == "structured":
        out.write(_dump(records))
        return 0
    out.write("level\tindex\t" + "\t".join(f"F({n})" for n in range(args.n + 1)) + "\n")
    for r in records:
        out.write(f"{r['level']}\t{r['index']}\t" + "\t".join(r["F"]) + "\n")
    return 0


def cmd_classify(args, out):
    e, b = _machine(args.machine), _bound(args.bound)
    verdict = complexity.check_membership(e, b, args.n, _fuel(args), jobs=args.jobs)
    if args.format == "structured":
        if isinstance(verdict, complexity.VerifiedUpTo):
            rec = {"verdict": "VerifiedUpTo", "n": verdict.n}
        else:
            rec = {"verdict": "Counterexample", "x": verdict.x, "actual_steps": verdict.actual_steps,
                   "allowed_bound": str(verdict.allowed_bound)}
        out.write(_dump({"machine": str(e), "bound": str(b), **rec}))
    else:
        out.write(f"formula\t{complexity.membership_wff(e, b)}\nverdict\t{verdict}\n")
    if args.assert_ and isinstance(verdict, complexity.Counterexample):
        return 1
    return 0


def cmd_bb(args, out):
    report = busy_beaver.bb_search(args.n, _fuel(args), jobs=args.jobs)
    if args.format == "structured":
        out.write(_dump(busy_beaver.report_record(report)))
    else:
        out.write(busy_beaver.render_report(report))
    if args.certificates:
        with open(args.certificates, "w") as fh:
            fh.write(busy_beaver.render_certificates(report))
    return 0


def cmd_report(args, out):
    levels = [h for _, h in diagonal.build_hierarchy(args.level)]
    cells = complexity.growth_report(levels, args.n, _fuel(args))
    if args.format == "structured":
        out.write(_dump([c.__dict__ for c in cells]))
    else:
        out.write(complexity.render_growth_tsv(cells))
    return 0


COMMANDS = {
    "run": cmd_run,
    "encode": cmd_encode,
    "theorems": cmd_theorems,
    "diagonal": cmd_diagonal,
    "hierarchy": cmd_hierarchy,
    "classify": cmd_classify,
    "bb": cmd_bb,
    "report": cmd_report,
}

DOMAIN_ERRORS = (
    DSLError,
    TheoryError,
    diagonal.FuelDeficit,
    busy_beaver.CapExceeded,
    busy_beaver.Inconclusive,
    OSError,
    ValueError,
)


def main(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = time.perf_counter()
    try:
        code = COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"diag-forge: usage error: {exc}\n")
        return 2
    except DOMAIN_ERRORS as exc:
        err.write(f"diag-forge: error: {exc}\n")
        return 1
    if args.timing:
        out.write(f"# time\t{time.perf_counter() - started:.3f}s\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
