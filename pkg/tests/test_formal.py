import os

import pytest
from hypothesis import given, settings, strategies as st

from conftest import DATA
from diag_forge.diagonal import build_hierarchy
from diag_forge.formal.closure import derivable_exists_closure, derivable_total_closure
from diag_forge.formal.formulas import (
    ExistsClass,
    FormulaSyntaxError,
    InTime,
    Not,
    Total,
    formula_code,
    formula_from_code,
    parse_formula,
    render_formula,
)
from diag_forge.formal.proofs import (
    AxiomRef,
    Proof,
    RuleApp,
    canonical_position,
    check_proof,
    enumerate_proofs,
    parse_proof,
    provably_total,
)
from diag_forge.formal.theory import (
    TheoryError,
    base_theory,
    extend_theory,
    load_theory,
    parse_theory,
    theory_code,
    theory_from_code,
)
from diag_forge.machine import catalogue
from diag_forge.machine.codec import compose, t_index
from diag_forge.machine.interpreter import iter_inputs, run

from oracles import first_proof_conclusions

S0 = base_theory()
SUCC = catalogue.index_of("succ")
DOUBLE = catalogue.index_of("double")
GOLDEN = os.path.join(os.path.dirname(__file__), "golden", "proofs")

atoms = st.one_of(
    st.builds(Total, st.integers(0, 10**20)),
    st.builds(ExistsClass, st.integers(0, 10**20)),
    st.builds(InTime, st.integers(0, 10**20), st.integers(0, 10**20)),
)
formulas = st.one_of(atoms, atoms.map(Not))


# -- formulas --------------------------------------------------------------

def test_parse_examples():
    assert parse_formula("Total(17)") == Total(17)
    assert render_formula(parse_formula("ExistsClass(3)")) == "ExistsClass(3)"
    assert parse_formula("InTime(4, 5)") == InTime(4, 5)
    assert parse_formula("Not(Total(2))") == Not(Total(2))
    with pytest.raises(FormulaSyntaxError) as err:
        parse_formula("Total(17")
    assert err.value.column == 9
    with pytest.raises(FormulaSyntaxError):
        parse_formula("Not(Not(Total(1)))")
    with pytest.raises(FormulaSyntaxError):
        parse_formula("Halts(1)")


@given(formulas)
def test_formula_roundtrips(f):
    assert parse_formula(render_formula(f)) == f
    assert formula_from_code(formula_code(f)) == f


@given(st.integers(0, 10**40))
def test_formula_numbering_is_onto(n):
    assert formula_code(formula_from_code(n)) == n


# -- theories --------------------------------------------------------------

def test_theory_files():
    assert load_theory(os.path.join(DATA, "theories", "base.thy")) == S0
    s1 = build_hierarchy(1)[1][0]
    assert load_theory(os.path.join(DATA, "theories", "s1.thy")) == s1
    assert parse_theory(s1.render()) == s1


def test_extend_theory():
    e_f = build_hierarchy(0)[0][1].index
    s1 = extend_theory(S0, ExistsClass(e_f))
    assert s1.level == 1 and s1.axioms[0] == ExistsClass(e_f)
    with pytest.raises(TheoryError):
        extend_theory(S0, Total(e_f))
    with pytest.raises(TheoryError):
        parse_theory("ruleset diag-fas-v1\naxioms\nTotal(0)\nextends\nTotal(1)\n")
    with pytest.raises(TheoryError):
        parse_theory("ruleset other\naxioms\nTotal(0)\n")


def test_theory_codes_roundtrip():
    for t, _ in build_hierarchy(2):
        assert theory_from_code(theory_code(t)) == t
    odd = parse_theory("ruleset diag-fas-v1\naxioms\nTotal(5)\n")
    assert theory_from_code(theory_code(odd)) == odd


# -- proofs ----------------------------------------------------------------

def test_check_proof_examples():
    ax = S0.axioms.index(Total(SUCC))
    one = Proof(((Total(SUCC), AxiomRef(ax)),))
    assert check_proof(one, S0)
    two = Proof(((Total(SUCC), AxiomRef(ax)), (Total(compose(SUCC, SUCC)), RuleApp("R-COMP", (0, 0)))))
    assert check_proof(two, S0)
    forward = Proof(((Total(compose(SUCC, SUCC)), RuleApp("R-COMP", (1, 1))), (Total(SUCC), AxiomRef(ax))))
    assert not check_proof(forward, S0)
    wrong = Proof(((Total(DOUBLE), AxiomRef(ax)),))
    assert not check_proof(wrong, S0)
    assert not check_proof(Proof(()), S0)
    assert not check_proof("1: Total(0) BY AX0", S0)


def test_enumeration_prefix_and_soundness():
    assert enumerate_proofs(S0, 0) == []
    first = enumerate_proofs(S0, 1)[0]
    assert first.steps == ((S0.axioms[0], AxiomRef(0)),)
    assert enumerate_proofs(S0, 5) == enumerate_proofs(S0, 9)[:5]
    ps = enumerate_proofs(S0, 3000)
    assert all(check_proof(p, S0) for p in ps)
    assert [p.index for p in ps] == list(range(3000))


def test_enumeration_matches_brute_force_order():
    bounds = catalogue.bound_catalogue_indices()
    for t, _ in build_hierarchy(1):
        expected = first_proof_conclusions(t.axioms, 400, bounds)
        assert [p.conclusion for p in enumerate_proofs(t, 400)] == expected


def test_provably_total_threshold():
    assert provably_total(S0, 0) == []
    assert SUCC not in provably_total(S0, 2)
    assert SUCC in provably_total(S0, 3)
    small, large = provably_total(S0, 40), provably_total(S0, 400)
    assert large[: len(small)] == small


def test_proof_text_roundtrip():
    for p in enumerate_proofs(S0, 300)[::7]:
        assert parse_proof(p.render()).steps == p.steps


def test_hand_built_proof_found_at_its_position():
    ax = S0.axioms.index(Total(SUCC))
    p = Proof(((Total(SUCC), AxiomRef(ax)), (Total(compose(SUCC, SUCC)), RuleApp("R-COMP", (0, 0)))))
    pos = canonical_position(p, S0)
    assert enumerate_proofs(S0, pos + 1)[pos].steps == p.steps


@pytest.mark.parametrize("name, position", [("exists_time_eF", 12), ("exists_hyperexp_time_eF", 17)])
def test_golden_proofs_in_s1(name, position):
    s1 = build_hierarchy(1)[1][0]
    with open(os.path.join(GOLDEN, name + ".proof")) as fh:
        p = parse_proof(fh.read())
    assert check_proof(p, s1)
    assert enumerate_proofs(s1, position + 1)[position].steps == p.steps


# -- closure ---------------------------------------------------------------

def desk_bound():
    """Largest index among base machines and their pairwise compositions."""
    base = list(catalogue.base_indices().values())
    return max(compose(a, b) for a in base for b in base)


def test_closure_contains_base():
    closure = derivable_total_closure(S0, 10**13)
    assert set(catalogue.base_indices().values()) <= closure


def test_closure_composition_threshold():
    c = compose(SUCC, DOUBLE)
    assert c in derivable_total_closure(S0, c)
    assert c not in derivable_total_closure(S0, c - 1)


def test_closure_agrees_with_enumeration():
    # everything the enumerator reaches within the bound is in the closure
    bound = 10**16
    closure = derivable_total_closure(S0, bound)
    for e in provably_total(S0, 20000):
        if e <= bound:
            assert e in closure


def test_closure_monotone_under_extension():
    levels = build_hierarchy(2)
    B = desk_bound()
    for (t, h), (t_next, _) in zip(levels, levels[1:]):
        lo, hi = derivable_total_closure(t, B), derivable_total_closure(t_next, B)
        assert lo <= hi
        assert h.index not in lo and h.index in hi


def test_exists_closure_rules():
    s1 = build_hierarchy(1)[1][0]
    e_f = build_hierarchy(0)[0][1].index
    ex = derivable_exists_closure(s1, 10**6)
    assert e_f in ex and t_index(e_f) in ex


def test_closure_members_halt():
    closure = sorted(derivable_total_closure(S0, 10**14))
    for e in closure:
        for x in iter_inputs(4):
            assert run(e, x, 10**6).halted
