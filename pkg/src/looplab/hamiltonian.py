"""Boundary Temperley-Lieb Hamiltonians, their ground states and sum rules."""

from __future__ import annotations

import functools
from fractions import Fraction

from .linalg import PolyMatrix, PolyVector, kernel_lifted, kernel_one_dim
from .links import Basis, Mode, Sector, as_mode, as_sector, enumerate_basis, generator_names, operator_matrix
from .poly import ZERO, MultiPoly

# Bases up to this size go through Bareiss; larger ones are lifted.  Bivariate
# fraction-free elimination grows fast, so two-boundary bases use a lower cap.
BAREISS_LIMIT = {Mode.ONE: 20, Mode.TWO: 6}


def default_sector(mode: Mode | str) -> Sector:
    return Sector.LP0 if as_mode(mode) is Mode.ONE else Sector.LPSTAR


def _check_compatible(mode: Mode, sector: Sector) -> None:
    allowed = {Mode.ONE: (Sector.FULL, Sector.LP0), Mode.TWO: (Sector.FULL, Sector.LPSTAR)}
    if sector not in allowed[mode]:
        raise ValueError(f"sector {sector.value} is not invariant for the {mode.value}-boundary Hamiltonian")


def build_hamiltonian(L: int, mode: Mode | str = Mode.ONE, sector: Sector | str | None = None,
                      basis: Basis | None = None) -> PolyMatrix:
    """Matrix of ``a(1-f-) [+ b(1-f+)] + sum_j (1-e_j)`` on the sector basis.

    Rows and columns follow ``basis`` when given (it must span the same
    sector), otherwise the canonical basis order.
    """
    mode = as_mode(mode)
    if basis is not None:
        sector = basis.sector
    sector = as_sector(sector) if sector is not None else default_sector(mode)
    _check_compatible(mode, sector)
    if basis is None:
        basis = enumerate_basis(L, sector)
    a = MultiPoly.var("a")
    b = MultiPoly.var("b")
    one = MultiPoly.const(1)
    entries: dict[tuple[int, int], MultiPoly] = {}

    def add(r: int, c: int, v: MultiPoly) -> None:
        entries[(r, c)] = entries.get((r, c), ZERO) + v

    for gen in generator_names(L, mode):
        weight = a if gen == "f-" else b if gen == "f+" else one
        op = operator_matrix(gen, basis)
        for col, row in enumerate(op.images):
            if row != col:
                add(col, col, weight)
                add(row, col, -weight)
    return PolyMatrix(len(basis), len(basis), entries)


@functools.lru_cache(maxsize=None)
def _ground_state_cached(L: int, mode: Mode, method: str) -> tuple[tuple[str, MultiPoly], ...]:
    basis = enumerate_basis(L, default_sector(mode))
    h = build_hamiltonian(L, mode, basis=basis)
    if method == "auto":
        method = "bareiss" if len(basis) <= BAREISS_LIMIT[mode] else "lifted"
    if method == "bareiss":
        vec = kernel_one_dim(h)
    elif method == "lifted":
        vec = kernel_lifted(h)
    else:
        raise ValueError(f"unknown kernel method {method!r}")
    return tuple(zip(basis.patterns, vec.entries))


def ground_state(L: int, mode: Mode | str = Mode.ONE, method: str = "auto") -> dict[str, MultiPoly]:
    """Content-normalized zero-energy eigenvector keyed by link pattern.

    ``method`` picks the kernel solver: ``"bareiss"``, ``"lifted"`` or
    ``"auto"`` (Bareiss for small bases).
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    return dict(_ground_state_cached(L, as_mode(mode), method))


def ground_state_vector(L: int, mode: Mode | str = Mode.ONE, method: str = "auto") -> PolyVector:
    return PolyVector(ground_state(L, mode, method).values())


def normalization_Z(L: int, mode: Mode | str = Mode.ONE) -> MultiPoly:
    """Sum of all ground-state components."""
    total = ZERO
    for v in ground_state(L, mode).values():
        total = total + v
    return total


def density_closed_form(L: int) -> Fraction:
    if L % 2 == 0:
        return Fraction(3 * L + 8, 8 * (2 * L + 3))
    return Fraction(3 * (L * L - 1), 8 * L * (2 * L + 3))


def density_rho(L: int) -> tuple[Fraction, Fraction]:
    """``(Z'(1) / (L Z(1)), closed form)`` for the one-boundary normalization."""
    if L < 2:
        raise ValueError("density needs L >= 2")
    z = normalization_Z(L, Mode.ONE)
    at_one = {"a": 1}
    symbolic = z.derivative("a").evaluate(at_one) / (L * z.evaluate(at_one))
    return symbolic, density_closed_form(L)
