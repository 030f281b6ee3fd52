from __future__ import annotations

from fractions import Fraction

import pytest

from looplab.asm import count_avh
from looplab.hamiltonian import (
    build_hamiltonian,
    density_closed_form,
    density_rho,
    ground_state,
    normalization_Z,
)
from looplab.linalg import is_parallel, rational_nullspace
from looplab.links import enumerate_basis
from looplab.poly import MultiPoly

P = MultiPoly.parse
SAMPLES = (Fraction(1, 2), Fraction(1), Fraction(2))


def _printed(data):
    return {k: P(v) for k, v in data.items()}


def test_one_boundary_L3():
    assert ground_state(3, "one") == _printed({")))": "a", "())": "2", ")()": "a + 2"})


def test_one_boundary_L4():
    assert ground_state(4, "one") == _printed({
        "))))": "a^2",
        "))()": "3*a^2 + 6*a",
        ")())": "2*a^2 + 6*a",
        "()))": "3*a",
        "()()": "3*a + 6",
        "(())": "3",
    })


def test_two_boundary_L3():
    assert ground_state(3, "two") == _printed({"|||": "a*b + a + b", "()|": "b + 2", "|()": "a + 2"})


def test_keys_follow_the_sector_basis():
    assert list(ground_state(5, "one")) == list(enumerate_basis(5, "LP0"))
    assert list(ground_state(4, "two")) == list(enumerate_basis(4, "LPSTAR"))


def test_hamiltonian_small():
    h = build_hamiltonian(2, "one")
    assert h.to_rows() == [[MultiPoly.const(1), -MultiPoly.var("a")], [MultiPoly.const(-1), MultiPoly.var("a")]]


def test_incompatible_sector():
    with pytest.raises(ValueError):
        build_hamiltonian(3, "one", "LPSTAR")


@pytest.mark.parametrize("L", range(1, 9))
@pytest.mark.parametrize("mode", ["one", "two"])
def test_column_sums_vanish(L, mode):
    for sector in ("FULL", "LP0" if mode == "one" else "LPSTAR"):
        assert all(s.is_zero() for s in build_hamiltonian(L, mode, sector).column_sums())


@pytest.mark.parametrize("L", range(2, 7))
@pytest.mark.parametrize("mode", ["one", "two"])
def test_ground_state_against_rational_nullspace(L, mode):
    """Oracle: the kernel of the specialized matrix, computed with plain fractions."""
    psi = list(ground_state(L, mode).values())
    h = build_hamiltonian(L, mode)
    for a in SAMPLES:
        for b in SAMPLES:
            point = {"a": a, "b": b}
            ns = rational_nullspace(h.evaluate(point))
            assert len(ns) == 1
            assert is_parallel(ns[0], [p.evaluate(point) for p in psi])


@pytest.mark.parametrize("L", range(1, 8))
@pytest.mark.parametrize("mode", ["one", "two"])
def test_components_positive_and_coprime(L, mode):
    psi = ground_state(L, mode)
    for a in SAMPLES:
        for b in SAMPLES:
            assert all(v.evaluate({"a": a, "b": b}) > 0 for v in psi.values())
    coeffs = [c for v in psi.values() for c in v.terms.values()]
    assert all(c.denominator == 1 for c in coeffs)


@pytest.mark.parametrize("L", [5, 6])
def test_lifted_kernel_matches_bareiss(L):
    for mode in ("one", "two"):
        assert ground_state(L, mode, "bareiss") == ground_state(L, mode, "lifted")


def test_normalization_examples():
    assert normalization_Z(3, "one") == P("2*a + 4")
    assert normalization_Z(4, "one") == P("6*a^2 + 18*a + 9")
    assert normalization_Z(3, "two") == P("a*b + 2*a + 2*b + 4")


@pytest.mark.parametrize("L", range(1, 9))
def test_sum_rule(L):
    assert normalization_Z(L, "one").evaluate({"a": 1}) == count_avh(2 * L + 3)


def test_density_examples():
    assert density_rho(3) == (Fraction(1, 9), Fraction(1, 9))
    assert density_rho(4) == (Fraction(5, 22), Fraction(5, 22))
    with pytest.raises(ValueError):
        density_rho(1)


@pytest.mark.parametrize("L", range(2, 9))
def test_density_closed_form(L):
    symbolic, closed = density_rho(L)
    assert symbolic == closed


def test_density_limit():
    # both parities tend to the ratio of leading coefficients
    assert abs(density_closed_form(10 ** 6) - Fraction(3, 16)) < Fraction(1, 10 ** 5)
    assert abs(density_closed_form(10 ** 6 + 1) - Fraction(3, 16)) < Fraction(1, 10 ** 5)


@pytest.mark.parametrize("L", [3, 5])
def test_two_boundary_factorization(L):
    z = normalization_Z(L, "two")
    assert z * z.evaluate({"a": 1, "b": 1}) == z.partial_eval("b", 1) * z.partial_eval("a", 1)
