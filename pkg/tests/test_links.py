from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from looplab import verify
from looplab.links import (
    Sector,
    apply_generator,
    check_relations,
    connections,
    enumerate_basis,
    expected_dimension,
    from_connections,
    generator_names,
    is_valid,
    operator_matrix,
    pattern_key,
)


def _noncrossing_matchings(L):
    """Non-crossing sets of arcs with no unmatched site under an arc (brute force)."""
    pairs = [(i, j) for i in range(L) for j in range(i + 1, L)]
    for k in range(L // 2 + 1):
        for arcs in itertools.combinations(pairs, k):
            used = [s for p in arcs for s in p]
            if len(set(used)) != len(used):
                continue
            if any(i < k2 < j < l2 for (i, j) in arcs for (k2, l2) in arcs):
                continue
            free = [s for s in range(L) if s not in used]
            if any(i < s < j for (i, j) in arcs for s in free):
                continue
            yield arcs, free


def _oracle(L, sector):
    out = set()
    for arcs, free in _noncrossing_matchings(L):
        word = [""] * L
        for i, j in arcs:
            word[i], word[j] = "(", ")"
        if sector is Sector.LP0:
            splits = [len(free)]
        elif sector is Sector.LPSTAR:
            splits = [0]
        else:
            splits = range(len(free) + 1)
        for s in splits:
            w = list(word)
            for n, site in enumerate(free):
                w[site] = ")" if n < s else "|"
            out.add("".join(w))
    if sector is not Sector.FULL:
        # a single sector uses the left or the identified boundary, not both
        out = {w for w in out if "|" not in w} if sector is Sector.LP0 else {w for w in out if not _has_left(w)}
    return out


def _has_left(word):
    return any(x == "L" for x in connections(word))


@pytest.mark.parametrize("L", range(1, 9))
@pytest.mark.parametrize("sector", list(Sector))
def test_basis_matches_brute_force(L, sector):
    basis = enumerate_basis(L, sector)
    assert set(basis) == _oracle(L, sector)
    assert len(basis) == expected_dimension(L, sector)
    assert list(basis) == sorted(basis, key=pattern_key)


@pytest.mark.parametrize("L", range(1, 13))
def test_dimension_formulas(L):
    assert len(enumerate_basis(L, "FULL")) == 2 ** L
    assert len(enumerate_basis(L, "LP0")) == math.comb(L, L // 2)
    assert len(enumerate_basis(L, "LPSTAR")) == math.comb(L, L // 2)


def test_small_bases():
    assert list(enumerate_basis(3, "LP0")) == [")))", ")()", "())"]
    assert list(enumerate_basis(3, "LPSTAR")) == ["()|", "|()", "|||"]
    assert list(enumerate_basis(2, "FULL")) == ["))", ")|", "()", "||"]


def test_validity():
    assert is_valid("(())")
    assert not is_valid("(()")
    assert not is_valid("|)", "FULL")
    assert not is_valid("(|)")
    assert not is_valid(")|", "LPSTAR")
    assert not is_valid("|", "LP0")
    assert not is_valid("")


def test_generator_examples():
    assert apply_generator("e1", "()", "LP0") == "()"
    assert apply_generator("e1", "))", "LP0") == "()"
    assert apply_generator("e2", "()()", "LP0") == "(())"
    assert apply_generator("f-", "()", "LP0") == "))"
    assert apply_generator("f-", "()|", "LPSTAR") == "|||"
    assert apply_generator("f+", "|()", "LPSTAR") == "|||"
    assert apply_generator("e1", "||", "LPSTAR") == "()"


def test_generator_errors():
    with pytest.raises(IndexError):
        apply_generator("e3", "()", "LP0")
    with pytest.raises(ValueError):
        apply_generator("g1", "()", "LP0")
    with pytest.raises(ValueError):
        apply_generator("f+", "()", "LP0")


def test_connection_round_trip():
    for L in range(1, 7):
        for w in enumerate_basis(L, "FULL"):
            assert from_connections(connections(w)) == w


@given(st.integers(2, 7), st.sampled_from(["LP0", "LPSTAR", "FULL"]), st.data())
@settings(max_examples=80, deadline=None)
def test_generators_preserve_sector(L, sector, data):
    mode = "one" if sector == "LP0" else "two"
    word = data.draw(st.sampled_from(list(enumerate_basis(L, sector))))
    for g in generator_names(L, mode):
        image = apply_generator(g, word, sector)
        assert is_valid(image, sector)
        # every generator is idempotent on patterns
        assert apply_generator(g, image, sector) == image


@pytest.mark.parametrize("L", range(2, 9))
@pytest.mark.parametrize("mode", ["one", "two"])
def test_relations_hold(L, mode):
    results = check_relations(L, mode)
    assert results and all(r.holds for r in results), [r.relation for r in results if not r.holds]
    names = {r.relation for r in results}
    if mode == "two":
        assert {"IJI=I", "JIJ=J"} <= names


def test_corrupted_generator_breaks_relations():
    results = check_relations(3, "one", verify.corrupted_action)
    failing = {r.relation for r in results if not r.holds}
    assert "e1e2e1=e1" in failing


def test_operator_matrix_is_a_map():
    basis = enumerate_basis(4, "FULL")
    m = operator_matrix("e2", basis)
    rows = m.to_rows()
    assert all(sum(col) == 1 for col in zip(*rows))
