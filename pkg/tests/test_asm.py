from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from looplab.asm import (
    Asm,
    asm_to_fpl,
    count_av,
    count_avh,
    count_n8,
    count_symmetry_class,
    fpl_asm_bijection,
    fpl_to_asm,
    minus_ones_in_row,
    vhasm_weight_exponent,
    vhasm_weighted_Z,
    vhasms,
)
from looplab.fpl import enumerate_fpl, enumerate_symmetric_fullgrid, full_grid_spec
from looplab.hamiltonian import normalization_Z
from looplab.verify import FIG2_ASM


def brute_asms(n):
    """All n x n ASMs: rows are {-1,0,1} vectors, column partial sums stay in {0,1}."""
    rows = [r for r in itertools.product((-1, 0, 1), repeat=n)
            if sum(r) == 1 and all(0 <= s <= 1 for s in itertools.accumulate(r))]
    out = []

    def rec(prefix, sums):
        if len(prefix) == n:
            if all(s == 1 for s in sums):
                out.append(Asm.from_rows(prefix))
            return
        for r in rows:
            new = [s + x for s, x in zip(sums, r)]
            if all(0 <= s <= 1 for s in new):
                rec(prefix + [r], new)

    rec([], [0] * n)
    return out


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 7), (4, 42), (5, 429)])
def test_brute_force_oracle_counts(n, count):
    found = brute_asms(n)
    assert len(found) == count
    assert all(m.is_valid() for m in found)


@pytest.mark.parametrize("n", [1, 3, 5])
def test_fpl_images_are_exactly_the_asms(n):
    images = {fpl_to_asm(c, n) for c in enumerate_fpl(full_grid_spec(n))}
    assert images == set(brute_asms(n))


@pytest.mark.parametrize("n", [1, 3, 5])
def test_round_trip(n):
    for c in enumerate_fpl(full_grid_spec(n)):
        m = fpl_asm_bijection(c)
        assert m.is_valid()
        assert fpl_asm_bijection(m) == c


def test_symmetry_classes_against_brute_force():
    five = brute_asms(5)
    assert sum(m.vertically_symmetric() for m in five) == count_av(5) == 3
    assert sum(m.vertically_symmetric() and m.horizontally_symmetric() for m in five) == count_avh(5)


def test_symmetric_fpls_give_vhasms():
    for n in (5, 7, 9):
        ms = vhasms(n)
        assert len(ms) == count_avh(n)
        assert all(m.vertically_symmetric() and m.horizontally_symmetric() for m in ms)


def test_product_formulas():
    assert [count_av(m) for m in (1, 3, 5, 7, 9)] == [1, 1, 3, 26, 646]
    assert [count_n8(m) for m in (0, 2, 4, 6, 8)] == [1, 1, 2, 11, 170]
    assert [count_avh(m) for m in range(1, 14, 2)] == [1, 1, 1, 2, 6, 33, 286]
    assert count_symmetry_class("A_VH", 11) == 33
    with pytest.raises(ValueError):
        count_symmetry_class("A_X", 3)
    with pytest.raises(ValueError):
        count_av(4)


def test_fig2_matrix():
    m = Asm.parse(FIG2_ASM)
    assert m.is_valid() and m.vertically_symmetric() and m.horizontally_symmetric()
    assert m in vhasms(9)
    assert fpl_to_asm(asm_to_fpl(m), 9) == m
    assert asm_to_fpl(m) in enumerate_symmetric_fullgrid(9)


def test_parse_errors():
    with pytest.raises(ValueError):
        Asm.parse("1 x\n0 1")
    with pytest.raises(ValueError):
        Asm.parse("2 0\n0 1")
    with pytest.raises(ValueError):
        asm_to_fpl(Asm.from_rows([[0, 1], [0, 1]]))


def test_row_statistics():
    m = Asm.parse(FIG2_ASM)
    assert minus_ones_in_row(m, 5) == 4
    assert vhasm_weight_exponent(m, 2) == 2
    with pytest.raises(IndexError):
        minus_ones_in_row(m, 10)


@pytest.mark.parametrize("L", [1, 2, 3, 4])
def test_weighted_census_matches_normalization(L):
    assert vhasm_weighted_Z(L) == normalization_Z(L, "one")


@given(st.sampled_from(brute_asms(4) + brute_asms(5)))
@settings(max_examples=50, deadline=None)
def test_transpose_and_reflections_preserve_validity(m):
    t = Asm.from_rows(m.columns())
    flipped = Asm.from_rows([row[::-1] for row in m.entries])
    assert t.is_valid() and flipped.is_valid()
    assert Asm.parse(m.to_text()) == m
