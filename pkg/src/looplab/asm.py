"""Alternating-sign matrices, the FPL correspondence and symmetry-class counts."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .fpl import FplConfig, enumerate_symmetric_fullgrid, full_grid_spec, grid_edges, incident_edges
from .poly import ZERO, MultiPoly


@dataclass(frozen=True)
class Asm:
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Asm":
        return cls(tuple(tuple(int(x) for x in row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        """Entry at 1-based ``(row, col)``."""
        i, j = ij
        return self.entries[i - 1][j - 1]

    def columns(self) -> list[tuple[int, ...]]:
        return list(zip(*self.entries))

    def is_valid(self) -> bool:
        n = self.n
        if any(len(row) != n for row in self.entries):
            return False
        return all(_alternates(line) for line in [*self.entries, *self.columns()])

    def vertically_symmetric(self) -> bool:
        return all(row == row[::-1] for row in self.entries)

    def horizontally_symmetric(self) -> bool:
        return self.entries == self.entries[::-1]

    def to_text(self) -> str:
        return "\n".join(" ".join(str(x) for x in row) for row in self.entries) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Asm":
        rows = [line.split() for line in text.strip().splitlines() if line.strip()]
        try:
            m = cls.from_rows(rows)
        except ValueError:
            raise ValueError("ASM text must contain integers") from None
        if any(x not in (-1, 0, 1) for row in m.entries for x in row):
            raise ValueError("ASM entries must be -1, 0 or 1")
        return m


def _alternates(line: Sequence[int]) -> bool:
    nonzero = [x for x in line if x]
    if not nonzero or nonzero[0] != 1 or nonzero[-1] != 1:
        return False
    return all(x in (-1, 1) for x in nonzero) and all(p != q for p, q in zip(nonzero, nonzero[1:]))


def check_asm(m: Asm) -> None:
    if not m.is_valid():
        raise ValueError("matrix is not an alternating-sign matrix")


# -- bijection --------------------------------------------------------------
#
# Vertex (i, j) is even when i + j is even.  An occupied edge is an arrow
# pointing at its even end; ASM partial sums give the arrows (an edge below
# row i in column j points up iff the column sum over rows 1..i is 0, the
# edge right of column j in row i points right iff the row sum over columns
# 1..j is 0).  Nonzero entries sit where the path goes straight: at an even
# vertex horizontal means +1 and vertical -1, at an odd vertex the reverse.

def _even(i: int, j: int) -> bool:
    return (i + j) % 2 == 0


def fpl_to_asm(c: FplConfig, n: int) -> Asm:
    if not c.is_valid_on(full_grid_spec(n)):
        raise ValueError("configuration is not an FPL on the standard full grid")
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            north, west, east, south = incident_edges(i, j)
            if west in c.occupied and east in c.occupied:
                row.append(1 if _even(i, j) else -1)
            elif north in c.occupied and south in c.occupied:
                row.append(-1 if _even(i, j) else 1)
            else:
                row.append(0)
        rows.append(row)
    out = Asm.from_rows(rows)
    check_asm(out)
    return out


def asm_to_fpl(m: Asm) -> FplConfig:
    check_asm(m)
    n = m.n
    occupied = set()
    for j in range(1, n + 1):
        partial = 0
        for i in range(0, n + 1):
            if i:
                partial += m[i, j]
            # edge between (i, j) and (i + 1, j); i = 0 and i = n are external
            target = (i, j) if partial == 0 else (i + 1, j)
            if _even(*target):
                occupied.add((1, j, "N") if i == 0 else (i, j, "S"))
    for i in range(1, n + 1):
        partial = 0
        for j in range(0, n + 1):
            if j:
                partial += m[i, j]
            target = (i, j + 1) if partial == 0 else (i, j)
            if _even(*target):
                occupied.add((i, 1, "W") if j == 0 else (i, j, "E"))
    return FplConfig(frozenset(occupied))


def fpl_asm_bijection(x: FplConfig | Asm, n: int | None = None) -> FplConfig | Asm:
    """Map an FPL on the full ``n x n`` grid to its ASM, or an ASM to its FPL."""
    if isinstance(x, Asm):
        return asm_to_fpl(x)
    if n is None:
        n = _grid_size(x)
    return fpl_to_asm(x, n)


def _grid_size(c: FplConfig) -> int:
    n = max(max(r, col) for r, col, _ in c.occupied)
    if set(c.occupied) - set(grid_edges(n, n)):
        raise ValueError("cannot infer grid size")
    return n


# -- counting ---------------------------------------------------------------

def _product(n: int, shift: int, a: int, b: int, c: int, d: int) -> int:
    total = Fraction(1)
    for k in range(n):
        total *= Fraction(
            (3 * k + shift) * math.factorial(6 * k + a) * math.factorial(2 * k + b),
            math.factorial(4 * k + c) * math.factorial(4 * k + d),
        )
    assert total.denominator == 1
    return total.numerator


@functools.lru_cache(maxsize=None)
def count_av(m: int) -> int:
    """Vertically symmetric ASMs of odd size ``m``."""
    if m < 1 or m % 2 == 0:
        raise ValueError("A_V needs an odd size >= 1")
    return _product((m - 1) // 2, 2, 3, 1, 2, 3)


@functools.lru_cache(maxsize=None)
def count_n8(m: int) -> int:
    """Cyclically symmetric transpose complement plane partitions in an ``m``-cube, ``m`` even."""
    if m < 0 or m % 2 == 1:
        raise ValueError("N_8 needs an even size >= 0")
    return _product(m // 2, 1, 0, 0, 0, 1)


@functools.lru_cache(maxsize=None)
def count_avh(m: int) -> int:
    """Vertically and horizontally symmetric ASMs of size ``m = 4n +- 1``."""
    if m < 1 or m % 2 == 0:
        raise ValueError("A_VH needs an odd size 4n+-1")
    if m % 4 == 1:
        n = (m - 1) // 4
        return count_av(2 * n + 1) * count_n8(2 * n)
    n = (m + 1) // 4
    return count_av(2 * n - 1) * count_n8(2 * n)


_CLASSES = {"A_V": count_av, "N_8": count_n8, "A_VH": count_avh}


def count_symmetry_class(name: str, arg: int) -> int:
    try:
        fn = _CLASSES[name]
    except KeyError:
        raise ValueError(f"unknown symmetry class {name!r}") from None
    return fn(arg)


# -- row statistics ---------------------------------------------------------

def minus_ones_in_row(m: Asm, r: int) -> int:
    if not 1 <= r <= m.n:
        raise IndexError(f"row {r} outside 1..{m.n}")
    return sum(1 for x in m.entries[r - 1] if x == -1)


def vhasm_weight_exponent(m: Asm, L: int) -> int:
    """Half the -1 count on row ``L + 3``, rounded down.

    The central column of a vertically symmetric ASM is fully alternating, so
    it always adds one sign to that row; the exponent is the number of -1's on
    one side of the vertical axis.
    """
    return minus_ones_in_row(m, L + 3) // 2


def vhasms(n: int) -> list[Asm]:
    return [fpl_to_asm(c, n) for c in enumerate_symmetric_fullgrid(n)]


def vhasm_weighted_Z(L: int) -> MultiPoly:
    """Sum over VHASMs of size ``2L+3`` of ``a`` to the half -1 count below the axis."""
    if L < 1:
        raise ValueError("L must be >= 1")
    total = ZERO
    for m in vhasms(2 * L + 3):
        total = total + MultiPoly({(vhasm_weight_exponent(m, L), 0): 1})
    return total
