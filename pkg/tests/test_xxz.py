from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from looplab.xxz import build_xxz_hd, delta_of, exact_trace_powers, spectrum_trace_check


def test_small_trace():
    h = build_xxz_hd(2, 1)
    assert h.shape == (4, 4)
    assert np.trace(h) == pytest.approx(5)
    assert exact_trace_powers(2, 1, 1) == [Fraction(5)]


@pytest.mark.parametrize("L", [1, 2, 3, 4])
@pytest.mark.parametrize("a", [1, 1.5, 2, 7])
def test_symmetric(L, a):
    h = build_xxz_hd(L, a)
    assert h.shape == (2 ** L, 2 ** L)
    assert np.abs(h - h.T).max() < 1e-12


def test_a_below_one_is_rejected():
    with pytest.raises(ValueError):
        delta_of(0.5)
    with pytest.raises(ValueError):
        build_xxz_hd(3, 0.9)


def test_limits():
    with pytest.raises(ValueError):
        spectrum_trace_check(9, 1)
    with pytest.raises(ValueError):
        spectrum_trace_check(2, 1, tol=0)


def test_eigenvalues_agree():
    """Oracle: numpy eigenvalues of both matrices at one size."""
    from looplab.hamiltonian import build_hamiltonian
    h = build_hamiltonian(4, "one", "FULL").evaluate({"a": Fraction(3, 2)})
    loop = np.sort(np.linalg.eigvals(np.array(h, dtype=float)).real)
    spin = np.sort(np.linalg.eigvalsh(build_xxz_hd(4, 1.5)))
    assert np.allclose(loop, spin, atol=1e-8)


@pytest.mark.parametrize("L", range(2, 7))
@pytest.mark.parametrize("a", [Fraction(1), Fraction(3, 2), Fraction(2)])
def test_trace_check_passes(L, a):
    r = spectrum_trace_check(L, a, 10, 1e-8)
    assert r.passed, r.deviations


def test_trace_check_detects_a_mismatch():
    r = spectrum_trace_check(3, Fraction(2), 4)
    wrong = type(r)(r.L, r.a, r.kmax, r.tol, r.exact, tuple(x * 1.01 for x in r.numeric))
    assert not wrong.passed
