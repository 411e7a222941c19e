import functools

import pytest
from hypothesis import given, settings, strategies as st

from diag_forge.diagonal import (
    _rows,
    FuelDeficit,
    TABLE_COLUMNS,
    build_hierarchy,
    compute_F,
    default_fuel,
    dominance_table,
    fuel_schedule,
    render_rows_structured,
    render_rows_tsv,
    theory_of,
)
from diag_forge.formal.theory import base_theory, theory_code, theory_from_code
from diag_forge.machine import catalogue
from diag_forge.machine.codec import is_diagonalizer_tagged
from diag_forge.machine.interpreter import kleene_t, run
from diag_forge.machine.model import to_bits

from oracles import oracle_F

FUEL = 10**6
LEVELS = build_hierarchy(2)
(S0, H0), (S1, H1), (S2, H2) = LEVELS
BOUNDS = catalogue.bound_catalogue_indices()

F0_VALUES = [0, 1, 3, 5, 9, 11, 13, 15, 17, 19, 21, 23, 25, 27, 29, 31, 33]
F0_STEPS = [1, 4, 12, 38, 78, 122, 147, 173, 203, 233, 263, 317, 349, 381, 413, 446, 483]
F1_VALUES = [0, 0, 1, 4, 6, 11, 13, 15, 17, 19, 21, 23, 26, 28, 30, 32, 34]
F2_VALUES = [0, 0, 0, 1, 5, 7, 13, 15, 17, 19, 21, 23, 25, 29, 31]


@functools.lru_cache(maxsize=None)
def oracle_level(code, n):
    """(bits, steps) for the diagonalizer of the theory with ``code``."""
    t = theory_from_code(code)
    value, steps = oracle_F(t.axioms, n, FUEL, BOUNDS, F=oracle_level)
    return to_bits(value), steps


def test_hierarchy_indices():
    assert H0.index == 1731 and H0.level == 0
    assert H1.index == 4494292812431
    assert 10**99 < H2.index < 10**100
    for t, h in LEVELS:
        assert is_diagonalizer_tagged(h.index) and theory_of(h.index) == t
    assert S1.axioms[0].e == H0.index and S2.axioms[0].e == H1.index


@pytest.mark.parametrize("level, n_max", [(0, 16), (1, 12)])
def test_agrees_with_oracle(level, n_max):
    t = LEVELS[level][0]
    for n in range(n_max + 1):
        row = compute_F(t, n, FUEL)
        bits, steps = oracle_level(theory_code(t), n)
        assert (to_bits(row.F_value), row.F_steps) == (bits, steps)


def test_pinned_tables():
    rows0 = dominance_table(S0, 16, FUEL)
    assert [r.F_value for r in rows0] == F0_VALUES
    assert [r.F_steps for r in rows0] == F0_STEPS
    assert [r.F_value for r in dominance_table(S1, 16, FUEL)] == F1_VALUES
    assert [compute_F(S1, n, FUEL).F_steps for n in range(12, 17)] == [2263, 2674, 3117, 3594, 4112]
    assert [r.F_value for r in dominance_table(S2, 14, FUEL)] == F2_VALUES


def test_first_contributors():
    row = compute_F(S0, 3, FUEL)
    assert row.F_value == 5
    assert (catalogue.index_of("succ"), 3, 4) in row.contributors
    assert row.argmax == (catalogue.index_of("succ"), 3)
    assert compute_F(S0, 0, FUEL).contributors == ()


def test_strict_dominance_fixtures():
    assert compute_F(S1, 12, FUEL).F_value > compute_F(S0, 12, FUEL).F_value
    assert compute_F(S2, 13, FUEL).F_value > compute_F(S1, 13, FUEL).F_value


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 15))
def test_F_monotone_in_n(n):
    for t in (S0, S1):
        assert compute_F(t, n + 1, FUEL).F_value >= compute_F(t, n, FUEL).F_value


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 16))
def test_F_exceeds_every_contributor(n):
    row = compute_F(S0, n, FUEL)
    assert all(v < row.F_value for _, _, v in row.contributors)


def test_run_matches_compute():
    for t, h in LEVELS[:2]:
        for n in range(8):
            row = compute_F(t, n, FUEL)
            out = run(h.index, to_bits(n), 10**7)
            assert (out.value, out.steps) == (row.F_value, row.F_steps)
            if row.F_steps > 1:
                assert not run(h.index, to_bits(n), row.F_steps - 1).halted


def test_diagonalizer_history_is_checkable():
    out = run(H0.index, to_bits(4), 10**6, want_history=True)
    assert kleene_t(H0.index, to_bits(4), out.history)
    assert not kleene_t(H1.index, to_bits(4), out.history)


def test_fuel_deficit():
    _rows.clear()
    with pytest.raises(FuelDeficit) as err:
        compute_F(S0, 6, 5)
    assert err.value.fuel == 5
    assert compute_F(S0, 6, FUEL).F_value == F0_VALUES[6]
    # a cached row is reused only when the fuel covers its longest inner run
    with pytest.raises(FuelDeficit):
        compute_F(S0, 6, 5)


def test_argument_errors():
    with pytest.raises(ValueError):
        compute_F(S0, -1, FUEL)
    with pytest.raises(ValueError):
        compute_F(S0, 2, 0)
    with pytest.raises(ValueError):
        compute_F(S0, 2, FUEL, inputs="bogus")
    with pytest.raises(ValueError):
        theory_of(17)


def test_lengths_mode_dominates_values_mode():
    for n in range(6):
        assert compute_F(S0, n, FUEL, inputs="lengths").F_value >= compute_F(S0, n, FUEL).F_value
    assert compute_F(S0, 3, FUEL, inputs="lengths").F_value == 9


def test_fuel_defaults(monkeypatch):
    assert fuel_schedule(0, 0) == 2 * 10**6
    monkeypatch.delenv("DIAG_FORGE_FUEL_DEFAULT", raising=False)
    assert default_fuel() == 10**6
    monkeypatch.setenv("DIAG_FORGE_FUEL_DEFAULT", "77")
    assert default_fuel() == 77
    monkeypatch.setenv("DIAG_FORGE_FUEL_DEFAULT", "0")
    with pytest.raises(ValueError):
        default_fuel()


def test_renderers():
    rows = dominance_table(S0, 3, FUEL)
    lines = render_rows_tsv(rows).splitlines()
    assert lines[0] == "\t".join(TABLE_COLUMNS)
    assert lines[4].split("\t")[:3] == ["3", "5", "38"]
    assert '"F": "5"' in render_rows_structured(rows)
    assert theory_of(H0.index) == base_theory()
