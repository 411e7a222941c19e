"""The twelve acceptance criteria, one test each.

Every test records a line in ``RESULTS`` before asserting, so the terminal
summary (see conftest) lists pass/fail per criterion even when some fail.
Run standalone with ``python tests/test_acceptance.py``.
"""

import functools
import os
import random
import sys
import time

sys.path.insert(0, os.path.dirname(__file__))

from conftest import DATA, REPO  # noqa: E402
from diag_forge.busy_beaver import bb_scalability_check, bb_search, report_record  # noqa: E402
from diag_forge.complexity import Counterexample, VerifiedUpTo, check_membership, output_length_check  # noqa: E402
from diag_forge.diagonal import build_hierarchy, compute_F, fuel_schedule  # noqa: E402
from diag_forge.formal.closure import derivable_total_closure  # noqa: E402
from diag_forge.formal.formulas import ExistsClass, Total  # noqa: E402
from diag_forge.formal.proofs import check_proof, enumerate_proofs, parse_proof, provably_total  # noqa: E402
from diag_forge.machine import catalogue  # noqa: E402
from diag_forge.machine.codec import compose, encode_machine, t_index  # noqa: E402
from diag_forge.machine.interpreter import ComputationHistory, iter_inputs, kleene_t, run, time_of  # noqa: E402
from diag_forge.machine.model import Machine, to_bits  # noqa: E402
from diag_forge.machine.universal import overhead_bound, simulate_via_universal  # noqa: E402

from oracles import naive_run, oracle_F, oracle_run, table_from_text  # noqa: E402

RESULTS = {}
N_DESK = 16
C_OVERHEAD = 11
BASE = catalogue.base_indices()
BOUNDS = catalogue.bound_catalogue_indices()


def record(k, ok, detail):
    RESULTS[k] = f"ACCEPTANCE #{k} {'PASS' if ok else 'FAIL'}: {detail}"
    print(RESULTS[k])
    assert ok, RESULTS[k]


def random_machine(rng, max_states=3):
    k = rng.randint(1, max_states)
    return Machine(k, tuple((rng.randint(0, 2), rng.randint(0, 1), rng.choice([-1] + list(range(k)))) for _ in range(3 * k)))


def desk_bound():
    """Largest index among base machines and their pairwise compositions."""
    return max(compose(a, b) for a in BASE.values() for b in BASE.values())


@functools.lru_cache(maxsize=None)
def _hierarchy():
    return build_hierarchy(2)


# -- 1 ---------------------------------------------------------------------

def test_01_interpreter_oracle_agreement():
    start = time.perf_counter()
    checked = bad = 0
    for name, e in BASE.items():
        with open(os.path.join(DATA, "machines", f"{name}.tm")) as fh:
            table = table_from_text(fh.read())
        for x in iter_inputs(8):
            out = run(e, x, 10**5)
            checked += 1
            if not out.halted or naive_run(*table, x, 10**5) != (out.output, out.steps):
                bad += 1
    elapsed = time.perf_counter() - start
    record(1, bad == 0 and elapsed < 60, f"{checked} runs, {bad} disagreements, {elapsed:.1f}s")


# -- 2 ---------------------------------------------------------------------

def _leaves(h, path=()):
    if h.configurations:
        yield path
    for i, part in enumerate(h.parts):
        yield from _leaves(part, path + (i,))


def _replace(h, path, confs):
    if not path:
        return ComputationHistory(confs, h.parts)
    parts = list(h.parts)
    parts[path[0]] = _replace(parts[path[0]], path[1:], confs)
    return ComputationHistory(h.configurations, tuple(parts))


def _at(h, path):
    for i in path:
        h = h.parts[i]
    return h


def _mutations(c, n_states):
    for s in range(-1, n_states):
        if s != c.state:
            yield c._replace(state=s)
    yield c._replace(head=c.head + 1)
    yield c._replace(head=c.head - 1)
    yield c._replace(offset=c.offset + 1)
    for i, ch in enumerate(c.tape):
        for other in "01_":
            if other != ch:
                yield c._replace(tape=c.tape[:i] + other + c.tape[i + 1:])
    yield c._replace(tape=c.tape + "1")


def test_02_kleene_t_equivalence():
    rng = random.Random(2024)
    succ, double = BASE["succ"], BASE["double"]
    extra = [compose(succ, double), compose(double, succ), t_index(succ), t_index(compose(succ, succ))]
    pairs = accepted = mutated = survivors = 0
    while pairs < 1000:
        e = extra[pairs % 4] if pairs % 10 == 0 else encode_machine(random_machine(rng))
        x = "".join(rng.choice("01") for _ in range(rng.randint(0, 6)))
        out = run(e, x, 300, want_history=True)
        if not out.halted:
            continue
        pairs += 1
        z = out.history
        accepted += kleene_t(e, x, z)
        path = rng.choice(list(_leaves(z)))
        confs = _at(z, path).configurations
        i = rng.randrange(len(confs))
        n_states = max(max(c.state for c in confs) + 2, 3)
        for m in _mutations(confs[i], n_states):
            tampered = _replace(z, path, confs[:i] + (m,) + confs[i + 1:])
            mutated += 1
            survivors += kleene_t(e, x, tampered)
    ok = accepted == pairs and survivors == 0
    record(2, ok, f"{accepted}/{pairs} histories accepted, {survivors}/{mutated} single-field mutations accepted")


# -- 3 ---------------------------------------------------------------------

def test_03_tape_growth_lemma():
    rng = random.Random(3)
    halted = violations = 0
    while halted < 10**4:
        e = encode_machine(random_machine(rng, 4))
        x = "".join(rng.choice("01") for _ in range(rng.randint(0, 10)))
        if run(e, x, 500).halted:
            halted += 1
            violations += not output_length_check(e, x, 500)
    record(3, violations == 0, f"{halted} halted runs, {violations} violations")


# -- 4 ---------------------------------------------------------------------

def test_04_construction_fidelity():
    s0 = _hierarchy()[0][0]
    start = time.perf_counter()
    mismatches = []
    for n in range(N_DESK + 1):
        fuel = fuel_schedule(0, n)
        row = compute_F(s0, n, fuel)
        if (row.F_value, row.F_steps) != oracle_F(s0.axioms, n, fuel, BOUNDS):
            mismatches.append(n)
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 300
    record(4, ok, f"n = 0..{N_DESK}, mismatches {mismatches or 'none'}, {elapsed:.1f}s")


# -- 5 ---------------------------------------------------------------------

def test_05_strict_dominance():
    s0 = _hierarchy()[0][0]
    checked = exceptions = 0
    for n in range(N_DESK + 1):
        F = compute_F(s0, n, fuel_schedule(0, n)).F_value
        for e in provably_total(s0, n):
            for x in range(n + 1):
                out = run(e, to_bits(x), fuel_schedule(0, n))
                checked += 1
                exceptions += not (out.halted and F > out.value)
    record(5, exceptions == 0, f"{checked} (n, e, x) triples, {exceptions} exceptions")


# -- 6 ---------------------------------------------------------------------

def test_06_diagonalizer_not_provably_total():
    s0, h0 = _hierarchy()[0]
    B = desk_bound()
    closure_hits = [b for b in (h0.index, 10**13, B) if h0.index in derivable_total_closure(s0, b)]
    target = Total(h0.index)
    proof_hits = sum(1 for p in enumerate_proofs(s0, 10**5) if p.conclusion == target)
    ok = not closure_hits and proof_hits == 0
    record(6, ok, f"B_max = {B:.3e}, closure hits {len(closure_hits)}, proof hits {proof_hits} in 10^5 proofs")


# -- 7 ---------------------------------------------------------------------

def test_07_hierarchy_strictness():
    (s0, h0), (s1, h1), (s2, _) = _hierarchy()
    B = desk_bound()
    in1 = h0.index in derivable_total_closure(s1, B)
    in2 = h1.index in derivable_total_closure(s2, max(B, h1.index))
    fuel = fuel_schedule(2, N_DESK)
    f0, f1 = compute_F(s0, 12, fuel).F_value, compute_F(s1, 12, fuel).F_value
    g1, g2 = compute_F(s1, 13, fuel).F_value, compute_F(s2, 13, fuel).F_value
    ok = in1 and in2 and f1 > f0 and g2 > g1
    detail = f"e_F in cl(S1) {in1}, e_F1 in cl(S2) {in2}, F1(12)={f1} > F0(12)={f0}, F2(13)={g2} > F1(13)={g1}"
    record(7, ok, detail)


# -- 8 ---------------------------------------------------------------------

def test_08_golden_derivations():
    (_, h0), (s1, _) = _hierarchy()[:2]
    hyperexp = catalogue.bound_index("hyperexp")
    expected = {
        "exists_time_eF": ExistsClass(t_index(h0.index)),
        "exists_hyperexp_time_eF": ExistsClass(compose(t_index(h0.index), hyperexp)),
    }
    good = 0
    for name, conclusion in expected.items():
        with open(os.path.join(REPO, "tests", "golden", "proofs", name + ".proof")) as fh:
            p = parse_proof(fh.read())
        good += check_proof(p, s1) and p.conclusion == conclusion
    record(8, good == 2, f"{good}/2 golden proofs check in S1 with the expected conclusions")


# -- 9 ---------------------------------------------------------------------

def test_09_simulation_overhead():
    start = time.perf_counter()
    runs = violations = mismatches = 0
    worst = 0.0
    for e in BASE.values():
        for length in range(1, 9):
            for v in range(2**length):
                x = format(v, f"0{length}b")
                out, inner, outer = simulate_via_universal(e, x, 10**9)
                ref = run(e, x, 10**5)
                runs += 1
                mismatches += (out, inner) != (ref.output, ref.steps)
                ratio = outer / overhead_bound(inner, x, e)
                worst = max(worst, ratio)
                violations += ratio > C_OVERHEAD
    elapsed = time.perf_counter() - start
    ok = violations == 0 and mismatches == 0 and elapsed < 300
    record(9, ok, f"C = {C_OVERHEAD}, {runs} runs, worst ratio {worst:.2f}, {violations} violations, {elapsed:.1f}s")


# -- 10 --------------------------------------------------------------------

def test_10_busy_beaver_exactness():
    reports = {N: bb_search(N, 1000, jobs=4) for N in range(1, 17)}
    resolved = [N for N, r in reports.items() if r.undecided == 0]
    smallest = resolved[0] if resolved else None
    pinned = smallest == 1 and reports[1].lower_bound == 0 and reports[16].lower_bound == 8
    again = report_record(bb_search(smallest, 1000)) == report_record(reports[smallest]) if resolved else False
    values = [reports[N].lower_bound for N in sorted(reports)]
    monotone = values == sorted(values)
    scalable = all(bb_scalability_check(N, 1000, reports[N]) for N in resolved)
    ok = pinned and again and monotone and scalable
    record(10, ok, f"smallest resolved N = {smallest} with BB = {reports[1].lower_bound}; "
                   f"BB(1..16) = {values}; reproducible {again}, monotone {monotone}, scalable {scalable}")


# -- 11 --------------------------------------------------------------------

CLOSED_FORMS = {
    "const1": lambda m: 1,
    "linear": lambda m: 2 ** (len(to_bits(m)) + 2),
    "quadratic": lambda m: 2 ** (2 * len(to_bits(m)) + 2),
    "cubic": lambda m: 2 ** (3 * len(to_bits(m)) + 2),
    "exp": lambda m: 2 ** (m + 7),
}


def _expected_verdict(e, h, n_max):
    for v in range(n_max + 1):
        x = to_bits(v)
        _, steps = oracle_run(e, x, 10**6)
        if steps > h(len(x)):
            return Counterexample(x, steps, h(len(x)))
    return VerifiedUpTo(n_max)


def test_11_membership_corpus():
    succ, double = BASE["succ"], BASE["double"]
    machines = list(BASE.values()) + [
        compose(succ, succ), compose(double, double), compose(succ, double), compose(double, succ), t_index(double),
    ]
    cases = [(e, name) for e in machines for name in CLOSED_FORMS]
    matches = recomputed = counterexamples = 0
    for e, name in cases:
        b = catalogue.bound_index(name)
        got = check_membership(e, b, 64, 10**6)
        matches += got == _expected_verdict(e, CLOSED_FORMS[name], 64)
        if isinstance(got, Counterexample):
            counterexamples += 1
            h = run(b, to_bits(len(got.x)), 10**6).value
            recomputed += got.actual_steps == time_of(e, got.x, 10**6) and got.allowed_bound == h
    ok = len(cases) == 50 and matches == 50 and recomputed == counterexamples
    record(11, ok, f"{matches}/{len(cases)} verdicts match, {recomputed}/{counterexamples} counterexamples recompute")


# -- 12 --------------------------------------------------------------------

def test_12_cli_golden_corpus():
    import io

    from diag_forge.cli import main

    from test_cli import GOLDEN, corpus

    cwd, env = os.getcwd(), os.environ.pop("DIAG_FORGE_FUEL_DEFAULT", None)
    os.chdir(REPO)
    try:
        total = same = 0
        for name, argv in corpus():
            out = io.StringIO()
            code = main(argv, out=out, err=io.StringIO())
            with open(os.path.join(GOLDEN, name + ".out")) as fh:
                golden = fh.read()
            total += 1
            same += golden == f"exit {code}\n{out.getvalue()}"
    finally:
        os.chdir(cwd)
        if env is not None:
            os.environ["DIAG_FORGE_FUEL_DEFAULT"] = env
    record(12, total == 20 and same == 20, f"{same}/{total} invocations byte-identical")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
