"""Link patterns and the boundary Temperley-Lieb generators acting on them.

A link pattern on ``L`` sites is a word over ``(``, ``)`` and ``|``.  Matched
parentheses are arcs between sites.  An unmatched ``)`` is a link to the left
boundary.  A bar is a link to the top of the strip (one-boundary mode), to the
right boundary (the two-boundary ``FULL`` space) or to the identified boundary
(sector ``LPSTAR``).  The generator actions on words do not depend on which of
these readings is used, except for where ``f-`` sends site 1 and its partner.

Generators are named ``"e1" .. "e{L-1}"``, ``"f-"`` and ``"f+"``.  All closed
loops carry weight 1, so every generator maps a pattern to a single pattern.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator, Sequence

from .linalg import PolyMatrix

OPEN, CLOSE, BAR = "(", ")", "|"
_ORDER = {CLOSE: 0, OPEN: 1, BAR: 2}

LinkPattern = str


class Sector(str, Enum):
    FULL = "FULL"
    LP0 = "LP0"
    LPSTAR = "LPSTAR"


class Mode(str, Enum):
    ONE = "one"
    TWO = "two"


def as_sector(s) -> Sector:
    return s if isinstance(s, Sector) else Sector(str(s).upper())


def as_mode(m) -> Mode:
    if isinstance(m, Mode):
        return m
    text = str(m).lower()
    aliases = {"one-boundary": "one", "1": "one", "two-boundary": "two", "2": "two"}
    return Mode(aliases.get(text, text))


def pattern_key(word: str) -> tuple[int, ...]:
    """Canonical sort key: lexicographic with ``)`` < ``(`` < ``|``."""
    return tuple(_ORDER[c] for c in word)


# -- validity ---------------------------------------------------------------

def is_valid(word: str, sector: Sector | str = Sector.FULL) -> bool:
    sector = as_sector(sector)
    depth = 0
    seen_bar = False
    for ch in word:
        if ch == OPEN:
            depth += 1
        elif ch == CLOSE:
            if depth:
                depth -= 1
            elif seen_bar or sector is Sector.LPSTAR:
                return False
        elif ch == BAR:
            if depth or sector is Sector.LP0:
                return False
            seen_bar = True
        else:
            return False
    return depth == 0 and len(word) > 0


def check_pattern(word: str, sector: Sector | str = Sector.FULL) -> None:
    if not is_valid(word, sector):
        raise ValueError(f"{word!r} is not a valid {as_sector(sector).value} link pattern")


# Connections are encoded per site: an int partner, or one of these markers.
LEFT = "L"
TOP = "T"


def connections(word: str) -> list:
    out: list = [None] * len(word)
    stack = []
    for i, ch in enumerate(word):
        if ch == OPEN:
            stack.append(i)
        elif ch == CLOSE:
            if stack:
                j = stack.pop()
                out[i], out[j] = j, i
            else:
                out[i] = LEFT
        else:
            out[i] = TOP
    return out


def from_connections(conn: Sequence) -> str:
    chars = []
    for i, x in enumerate(conn):
        if x == LEFT:
            chars.append(CLOSE)
        elif x == TOP:
            chars.append(BAR)
        else:
            chars.append(OPEN if x > i else CLOSE)
    return "".join(chars)


# -- bases ------------------------------------------------------------------

def _generate(L: int, sector: Sector) -> Iterator[str]:
    word: list[str] = []

    def rec(depth: int, seen_bar: bool) -> Iterator[str]:
        remaining = L - len(word)
        if remaining == 0:
            if depth == 0:
                yield "".join(word)
            return
        if depth > remaining:
            return
        # CLOSE
        if depth:
            word.append(CLOSE)
            yield from rec(depth - 1, seen_bar)
            word.pop()
        elif not seen_bar and sector is not Sector.LPSTAR:
            word.append(CLOSE)
            yield from rec(0, seen_bar)
            word.pop()
        # OPEN
        if depth + 1 <= remaining - 1:
            word.append(OPEN)
            yield from rec(depth + 1, seen_bar)
            word.pop()
        # BAR
        if depth == 0 and sector is not Sector.LP0:
            word.append(BAR)
            yield from rec(0, True)
            word.pop()

    yield from rec(0, False)


@dataclass(frozen=True)
class Basis:
    L: int
    sector: Sector
    patterns: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self):
        return iter(self.patterns)

    def __getitem__(self, i: int) -> str:
        return self.patterns[i]

    def index(self, word: str) -> int:
        try:
            return self._index[word]
        except KeyError:
            raise KeyError(f"{word!r} is not in the {self.sector.value} basis for L={self.L}") from None

    @property
    def _index(self) -> dict[str, int]:
        cache = self.__dict__.get("_index_cache")
        if cache is None:
            cache = {w: i for i, w in enumerate(self.patterns)}
            object.__setattr__(self, "_index_cache", cache)
        return cache


def enumerate_basis(L: int, sector: Sector | str = Sector.FULL) -> Basis:
    """All valid patterns of ``sector`` on ``L`` sites, in canonical order."""
    if L < 1:
        raise ValueError("link patterns need L >= 1")
    sector = as_sector(sector)
    return Basis(L, sector, tuple(_generate(L, sector)))


def expected_dimension(L: int, sector: Sector | str) -> int:
    sector = as_sector(sector)
    if sector is Sector.FULL:
        return 2 ** L
    return math.comb(L, L // 2)


# -- generator actions ------------------------------------------------------

def generator_names(L: int, mode: Mode | str) -> list[str]:
    names = [f"e{i}" for i in range(1, L)] + ["f-"]
    if as_mode(mode) is Mode.TWO:
        names.append("f+")
    return names


def _e(i: int, word: str) -> str:
    conn = connections(word)
    x, y = conn[i], conn[i + 1]
    if x == i + 1:
        return word
    conn[i], conn[i + 1] = i + 1, i
    x_site = isinstance(x, int)
    y_site = isinstance(y, int)
    if x_site and y_site:
        conn[x], conn[y] = y, x
    elif x_site:
        conn[x] = y
    elif y_site:
        conn[y] = x
    return from_connections(conn)


def _f_minus(word: str, boundary: str) -> str:
    conn = connections(word)
    x = conn[0]
    if isinstance(x, int):
        conn[x] = boundary
    conn[0] = boundary
    return from_connections(conn)


def _f_plus(word: str) -> str:
    conn = connections(word)
    last = len(word) - 1
    x = conn[last]
    if isinstance(x, int):
        conn[x] = TOP
    conn[last] = TOP
    return from_connections(conn)


def apply_generator(gen: str, word: str, sector: Sector | str = Sector.FULL) -> str:
    """Image of ``word`` under generator ``gen`` (coefficient is always 1)."""
    sector = as_sector(sector)
    L = len(word)
    if gen.startswith("e"):
        try:
            i = int(gen[1:])
        except ValueError:
            raise ValueError(f"unknown generator {gen!r}") from None
        if not 1 <= i <= L - 1:
            raise IndexError(f"generator {gen} out of range for L={L}")
        return _e(i - 1, word)
    if gen == "f-":
        return _f_minus(word, TOP if sector is Sector.LPSTAR else LEFT)
    if gen == "f+":
        if sector is Sector.LP0:
            raise ValueError("f+ does not act on the one-boundary sector LP0")
        return _f_plus(word)
    raise ValueError(f"unknown generator {gen!r}")


Action = Callable[[str, str, Sector], str]


@dataclass(frozen=True)
class OperatorMatrix:
    """0/1 matrix of a generator; column ``j`` has its unit in row ``images[j]``."""

    generator: str
    basis: Basis
    images: tuple[int, ...]

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.basis is not other.basis and self.basis != other.basis:
            raise ValueError("operators act on different bases")
        return OperatorMatrix(
            f"{self.generator}{other.generator}",
            self.basis,
            tuple(self.images[j] for j in other.images),
        )

    def same_matrix(self, other: "OperatorMatrix") -> bool:
        return self.images == other.images

    def is_idempotent(self) -> bool:
        return (self @ self).images == self.images

    def to_polymatrix(self) -> PolyMatrix:
        return PolyMatrix(len(self.images), len(self.images), {(r, c): 1 for c, r in enumerate(self.images)})

    def to_rows(self) -> list[list[int]]:
        n = len(self.images)
        out = [[0] * n for _ in range(n)]
        for c, r in enumerate(self.images):
            out[r][c] = 1
        return out


def operator_matrix(gen: str, basis: Basis, action: Action | None = None) -> OperatorMatrix:
    act = action or apply_generator
    images = []
    for w in basis:
        img = act(gen, w, basis.sector)
        images.append(basis.index(img))
    return OperatorMatrix(gen, basis, tuple(images))


def identity_operator(basis: Basis) -> OperatorMatrix:
    return OperatorMatrix("1", basis, tuple(range(len(basis))))


# -- relations --------------------------------------------------------------

@dataclass(frozen=True)
class RelationResult:
    L: int
    mode: str
    relation: str
    holds: bool

    @property
    def status(self) -> str:
        return "pass" if self.holds else "fail"


def ij_words(L: int) -> tuple[list[str], list[str]]:
    """Generator words for the two-boundary elements ``I`` and ``J`` (left factor first)."""
    if L % 2 == 0:
        i_word = [f"e{2 * i + 1}" for i in range(L // 2)]
        j_word = ["f-"] + [f"e{2 * i}" for i in range(1, L // 2)] + ["f+"]
    else:
        i_word = ["f-"] + [f"e{2 * i}" for i in range(1, (L - 1) // 2 + 1)]
        j_word = [f"e{2 * i - 1}" for i in range(1, (L - 1) // 2 + 1)] + ["f+"]
    return i_word, j_word


def _product(ops: dict[str, OperatorMatrix], word: Sequence[str], basis: Basis) -> OperatorMatrix:
    out = identity_operator(basis)
    for g in word:
        out = out @ ops[g]
    return out


def check_relations(L: int, mode: Mode | str, action: Action | None = None) -> list[RelationResult]:
    """Evaluate the algebra relations as matrix identities on the full basis.

    Results are sorted by relation name.
    """
    mode = as_mode(mode)
    if L < 2:
        raise ValueError("relations need L >= 2")
    basis = enumerate_basis(L, Sector.FULL)
    ops = {g: operator_matrix(g, basis, action) for g in generator_names(L, mode)}
    checks: dict[str, bool] = {}

    def rel(name: str, lhs: Sequence[str], rhs: Sequence[str]) -> None:
        checks[name] = _product(ops, lhs, basis).same_matrix(_product(ops, rhs, basis))

    for i in range(1, L):
        rel(f"e{i}^2=e{i}", [f"e{i}", f"e{i}"], [f"e{i}"])
    for i in range(1, L - 1):
        rel(f"e{i}e{i+1}e{i}=e{i}", [f"e{i}", f"e{i+1}", f"e{i}"], [f"e{i}"])
        rel(f"e{i+1}e{i}e{i+1}=e{i+1}", [f"e{i+1}", f"e{i}", f"e{i+1}"], [f"e{i+1}"])
    for i in range(1, L):
        for j in range(i + 2, L):
            rel(f"e{i}e{j}=e{j}e{i}", [f"e{i}", f"e{j}"], [f"e{j}", f"e{i}"])
    rel("f-^2=f-", ["f-", "f-"], ["f-"])
    rel("e1f-e1=e1", ["e1", "f-", "e1"], ["e1"])
    if mode is Mode.TWO:
        rel("f+^2=f+", ["f+", "f+"], ["f+"])
        rel(f"e{L-1}f+e{L-1}=e{L-1}", [f"e{L-1}", "f+", f"e{L-1}"], [f"e{L-1}"])
        i_word, j_word = ij_words(L)
        rel("IJI=I", i_word + j_word + i_word, i_word)
        rel("JIJ=J", j_word + i_word + j_word, j_word)
    return [RelationResult(L, mode.value, name, ok) for name, ok in sorted(checks.items())]
