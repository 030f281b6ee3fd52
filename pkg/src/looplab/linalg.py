"""Sparse polynomial matrices, polynomial vectors and exact kernel solvers.

Two exact solvers are provided for one-dimensional kernels:

* :func:`kernel_one_dim` runs fraction-free (Bareiss) elimination directly on
  the polynomial entries.  It is the reference route and is used for small
  matrices.
* :func:`kernel_lifted` lifts the kernel as a power series around a rational
  base point, recovers the polynomial vector by a Pade step and certifies the
  result by checking ``M @ v == 0`` symbolically.  It scales to the larger
  link-pattern bases where Bareiss suffers from degree growth.

Both return the same content-normalized vector.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .poly import ONE, ZERO, MultiPoly, gcd_many, rational_content

log = logging.getLogger(__name__)

Point = Mapping[str, object]


class KernelError(ArithmeticError):
    """Raised when a matrix does not have the expected one-dimensional kernel."""

    def __init__(self, message: str, rank: int | None = None):
        super().__init__(message)
        self.rank = rank


@dataclass(frozen=True)
class PolyVector:
    entries: tuple[MultiPoly, ...]

    def __init__(self, entries: Iterable):
        object.__setattr__(self, "entries", tuple(MultiPoly.coerce(e) for e in entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i: int) -> MultiPoly:
        return self.entries[i]

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def scale(self, c) -> "PolyVector":
        return PolyVector(e * c for e in self.entries)

    def evaluate(self, point: Point) -> list[Fraction]:
        return [e.evaluate(point) for e in self.entries]

    def total(self) -> MultiPoly:
        out = ZERO
        for e in self.entries:
            out = out + e
        return out

    def __str__(self) -> str:
        return "(" + ", ".join(str(e) for e in self.entries) + ")"


@dataclass(frozen=True)
class PolyMatrix:
    """Sparse ``rows x cols`` matrix; only nonzero entries are stored."""

    rows: int
    cols: int
    entries: Mapping[tuple[int, int], MultiPoly] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            v = MultiPoly.coerce(v)
            if not v.is_zero():
                clean[(r, c)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "PolyMatrix":
        n = len(rows)
        m = len(rows[0]) if n else 0
        return cls(n, m, {(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row)})

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        return cls(n, n, {(i, i): ONE for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "PolyMatrix":
        return cls(rows, cols, {})

    def __getitem__(self, rc: tuple[int, int]) -> MultiPoly:
        return self.entries.get(rc, ZERO)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_rows(self) -> list[list[MultiPoly]]:
        out = [[ZERO] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def row_dicts(self) -> list[dict[int, MultiPoly]]:
        out: list[dict[int, MultiPoly]] = [{} for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._same_shape(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, ZERO) + v
        return PolyMatrix(self.rows, self.cols, out)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return self + other.scale(-1)

    def __neg__(self) -> "PolyMatrix":
        return self.scale(-1)

    def scale(self, c) -> "PolyMatrix":
        c = MultiPoly.coerce(c)
        return PolyMatrix(self.rows, self.cols, {k: v * c for k, v in self.entries.items()})

    def __matmul__(self, other):
        if isinstance(other, PolyVector):
            if len(other) != self.cols:
                raise ValueError("dimension mismatch in matrix-vector product")
            out = [ZERO] * self.rows
            for (r, c), v in self.entries.items():
                if not other[c].is_zero():
                    out[r] = out[r] + v * other[c]
            return PolyVector(out)
        if isinstance(other, PolyMatrix):
            if self.cols != other.rows:
                raise ValueError("dimension mismatch in matrix product")
            right = other.row_dicts()
            out: dict[tuple[int, int], MultiPoly] = {}
            for (r, k), v in self.entries.items():
                for c, w in right[k].items():
                    out[(r, c)] = out.get((r, c), ZERO) + v * w
            return PolyMatrix(self.rows, other.cols, out)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def column_sums(self) -> list[MultiPoly]:
        sums = [ZERO] * self.cols
        for (_, c), v in self.entries.items():
            sums[c] = sums[c] + v
        return sums

    def evaluate(self, point: Point) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v.evaluate(point)
        return out

    def variables(self) -> tuple[str, ...]:
        used = set()
        for v in self.entries.values():
            used.update(v.variables)
        return tuple(x for x in ("a", "b") if x in used)

    def trace(self) -> MultiPoly:
        out = ZERO
        for i in range(min(self.rows, self.cols)):
            out = out + self[(i, i)]
        return out

    def _same_shape(self, other: "PolyMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")


# -- normalization -----------------------------------------------------------

def content_normalize(v: PolyVector | Sequence) -> PolyVector:
    """Scale ``v`` by a rational so its coefficients are coprime integers.

    The sign is fixed so the entries sum to a positive number at ``a = b = 1``;
    if that sum vanishes, the first nonzero coefficient (entry order, then
    graded lex term order) is made positive.
    """
    if not isinstance(v, PolyVector):
        v = PolyVector(v)
    coeffs = [c for e in v for c in e.terms.values()]
    if not coeffs:
        raise ValueError("cannot normalize the zero vector")
    scaled = v.scale(1 / rational_content(coeffs))
    s = scaled.total().evaluate({"a": 1, "b": 1})
    if s < 0:
        scaled = scaled.scale(-1)
    elif s == 0:
        for e in scaled:
            if not e.is_zero():
                if e.items()[0][1] < 0:
                    scaled = scaled.scale(-1)
                break
    return scaled


def is_content_normalized(v: PolyVector) -> bool:
    try:
        return content_normalize(v) == v
    except ValueError:
        return False


# -- Bareiss ----------------------------------------------------------------

def _integral_rows(m: PolyMatrix) -> list[dict[int, MultiPoly]]:
    rows = m.row_dicts()
    out = []
    for row in rows:
        den = 1
        for v in row.values():
            for c in v.terms.values():
                den = den * c.denominator // _gcd(den, c.denominator)
        out.append({c: v * den for c, v in row.items()} if den != 1 else row)
    return out


def _gcd(x: int, y: int) -> int:
    while y:
        x, y = y, x % y
    return abs(x)


def bareiss_echelon(m: PolyMatrix) -> tuple[list[dict[int, MultiPoly]], list[int]]:
    """Fraction-free row echelon form.

    Pivot rule: for each column in order, the first remaining row (in row
    order) holding a nonzero entry.  Returns the reduced rows and the pivot
    columns; row ``k`` of the result carries pivot ``pivots[k]``.
    """
    rows = _integral_rows(m)
    n_rows = len(rows)
    pivots: list[int] = []
    prev = ONE
    k = 0
    for col in range(m.cols):
        if k >= n_rows:
            break
        piv = next((r for r in range(k, n_rows) if col in rows[r]), None)
        if piv is None:
            continue
        rows[k], rows[piv] = rows[piv], rows[k]
        prow = rows[k]
        p = prow[col]
        for i in range(k + 1, n_rows):
            row = rows[i]
            lead = row.pop(col, None)
            new: dict[int, MultiPoly] = {}
            if lead is None:
                if p == prev:
                    continue
                for j, v in row.items():
                    new[j] = (v * p).exact_div(prev)
            else:
                cols = set(row) | set(prow)
                cols.discard(col)
                for j in cols:
                    val = row.get(j, ZERO) * p - lead * prow.get(j, ZERO)
                    if not val.is_zero():
                        new[j] = val.exact_div(prev) if prev != ONE else val
            rows[i] = {j: v for j, v in new.items() if not v.is_zero()}
        prev = p
        pivots.append(col)
        k += 1
    return rows, pivots


def kernel_one_dim(m: PolyMatrix) -> PolyVector:
    """Content-normalized generator of the one-dimensional kernel of ``m``.

    Uses fraction-free elimination on the polynomial entries, fraction-free
    back substitution, removal of the common polynomial factor, and a
    symbolic ``m @ v == 0`` check.
    """
    if m.rows != m.cols:
        raise ValueError("kernel_one_dim needs a square matrix")
    n = m.cols
    rows, pivots = bareiss_echelon(m)
    rank = len(pivots)
    if rank != n - 1:
        raise KernelError(
            f"expected a one-dimensional kernel, found rank {rank} for size {n}", rank=rank
        )
    (free,) = [c for c in range(n) if c not in set(pivots)]
    x: list[MultiPoly] = [ZERO] * n
    x[free] = rows[rank - 1][pivots[-1]] if rank else ONE
    for k in range(rank - 1, -1, -1):
        row = rows[k]
        pc = pivots[k]
        acc = ZERO
        for j, v in row.items():
            if j != pc and not x[j].is_zero():
                acc = acc + v * x[j]
        x[pc] = (-acc).exact_div(row[pc]) if not acc.is_zero() else ZERO
    g = gcd_many(x)
    if not g.is_zero() and not g.is_constant():
        x = [xi.exact_div(g) for xi in x]
    vec = content_normalize(x)
    _certify(m, vec)
    return vec


def _certify(m: PolyMatrix, v: PolyVector) -> None:
    residual = m @ v
    if not residual.is_zero():
        bad = next(i for i, e in enumerate(residual) if not e.is_zero())
        raise ArithmeticError(f"kernel check failed in row {bad}: {residual[bad]}")


# -- rational linear algebra ------------------------------------------------

def rational_nullspace(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of the right nullspace of a rational matrix (Gauss-Jordan)."""
    mat = [[Fraction(x) for x in r] for r in rows]
    n_rows = len(mat)
    n_cols = len(mat[0]) if n_rows else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(n_rows):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * n_cols
        v[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -mat[i][fcol]
        basis.append(v)
    return basis


def is_parallel(u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    """True when ``u`` and ``v`` are nonzero and proportional."""
    ratio = None
    for x, y in zip(u, v):
        if (x == 0) != (y == 0):
            return False
        if x != 0:
            q = Fraction(x) / Fraction(y)
            if ratio is None:
                ratio = q
            elif q != ratio:
                return False
    return ratio is not None


class _BorderedSolver:
    """Solves ``[M0; w] x = rhs`` for many right-hand sides.

    ``M0`` is ``n x n`` with a one-dimensional kernel not orthogonal to ``w``;
    the stacked ``(n+1) x n`` system has full column rank.  Elimination keeps
    sparse rational rows and records the operations for reuse.
    """

    def __init__(self, m0: Sequence[dict[int, Fraction]], w: dict[int, Fraction], n: int):
        rows = [dict(r) for r in m0] + [dict(w)]
        self.n = n
        order = list(range(len(rows)))
        ops: list[tuple[int, int, Fraction]] = []
        pivot_rows: list[int] = []
        used = [False] * len(rows)
        for col in range(n):
            piv = None
            best = None
            for r in order:
                if not used[r] and col in rows[r]:
                    size = len(rows[r])
                    if best is None or size < best:
                        piv, best = r, size
            if piv is None:
                raise KernelError("bordered system is singular at this base point")
            used[piv] = True
            pivot_rows.append(piv)
            prow = rows[piv]
            inv = 1 / prow[col]
            for r in order:
                if used[r] or col not in rows[r]:
                    continue
                f = rows[r][col] * inv
                row = rows[r]
                for j, v in prow.items():
                    nv = row.get(j, 0) - f * v
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
                ops.append((r, piv, f))
        self.rows = rows
        self.ops = ops
        self.pivot_rows = pivot_rows

    def solve(self, rhs: Sequence[Fraction]) -> list[Fraction]:
        b = list(rhs)
        for r, piv, f in self.ops:
            if b[piv]:
                b[r] -= f * b[piv]
        x = [Fraction(0)] * self.n
        for col in range(self.n - 1, -1, -1):
            prow = self.rows[self.pivot_rows[col]]
            acc = b[self.pivot_rows[col]]
            for j, v in prow.items():
                if j > col:
                    acc -= v * x[j]
            x[col] = acc / prow[col]
        return x


_BASE_POINTS = (
    (Fraction(1), Fraction(1)),
    (Fraction(2), Fraction(3)),
    (Fraction(1, 2), Fraction(5, 3)),
    (Fraction(3), Fraction(1, 3)),
)


def kernel_lifted(m: PolyMatrix, max_degree: int | None = None) -> PolyVector:
    """Kernel generator via power-series lifting and Pade reconstruction.

    The kernel vector divided by a linear normalization is expanded around a
    base point ``(a0, b0)``; for degree boxes of increasing total size a
    common denominator is solved for, and the first box whose candidate passes
    the symbolic check ``m @ v == 0`` is returned.  That box is the exact
    degree box of the primitive kernel vector, so the result matches
    :func:`kernel_one_dim`.
    """
    if m.rows != m.cols:
        raise ValueError("kernel_lifted needs a square matrix")
    n = m.cols
    if n == 0:
        raise ValueError("empty matrix")
    variables = m.variables()
    if max_degree is None:
        max_degree = n
    last_error: Exception | None = None
    for a0, b0 in _BASE_POINTS:
        try:
            return _lift_at(m, variables, a0, b0, max_degree)
        except KernelError as exc:
            last_error = exc
            log.debug("lifting at (%s, %s) failed: %s", a0, b0, exc)
    raise KernelError(f"no usable base point for lifting: {last_error}")


def _lift_at(m: PolyMatrix, variables, a0: Fraction, b0: Fraction, max_degree: int) -> PolyVector:
    n = m.cols
    two = "b" in variables
    uses_a = "a" in variables
    # Taylor blocks of m around the base point: blocks[(p, q)][row] = {col: value}
    blocks: dict[tuple[int, int], list[dict[int, Fraction]]] = {}
    for (r, c), v in m.entries.items():
        for (p, q), coef in v.shift(a0, b0).terms.items():
            blocks.setdefault((p, q), [dict() for _ in range(n)])[r][c] = coef
    m0 = blocks.pop((0, 0), [dict() for _ in range(n)])
    w = {i: Fraction(1) for i in range(n)}
    solver = _BorderedSolver(m0, w, n)

    series: dict[tuple[int, int], list[Fraction]] = {}

    def coeff(j: int, k: int) -> list[Fraction]:
        key = (j, k)
        if key in series:
            return series[key]
        rhs = [Fraction(0)] * (n + 1)
        if key == (0, 0):
            rhs[n] = Fraction(1)
        else:
            for (p, q), blk in blocks.items():
                if p <= j and q <= k:
                    prev = coeff(j - p, k - q)
                    for r, row in enumerate(blk):
                        acc = Fraction(0)
                        for c, v in row.items():
                            if prev[c]:
                                acc += v * prev[c]
                        if acc:
                            rhs[r] -= acc
        series[key] = solver.solve(rhs)
        return series[key]

    for total in range(0, 2 * max_degree + 1):
        if two:
            boxes = [(da, total - da) for da in range(total, -1, -1)]
        elif uses_a:
            boxes = [(total, 0)]
        else:
            boxes = [(0, 0)] if total == 0 else []
        for da, db in boxes:
            if da > max_degree or db > max_degree:
                continue
            cand = _pade_candidate(coeff, n, da, db, uses_a, two)
            if cand is None:
                continue
            vec = PolyVector(p.shift(-a0, -b0) for p in cand)
            if vec.is_zero():
                continue
            vec = content_normalize(vec)
            if (m @ vec).is_zero():
                return vec
        if not uses_a and not two:
            break
    raise KernelError(f"no polynomial kernel vector of degree <= {max_degree} found")


def _pade_candidate(coeff, n: int, da: int, db: int, uses_a: bool, two: bool) -> list[MultiPoly] | None:
    """Common denominator ``Z`` with ``Z(0,0) = 1`` in box ``(da, db)``, or None."""
    small = [(p, q) for p in range(da + 1) for q in range(db + 1)]
    unknowns = [e for e in small if e != (0, 0)]
    big_a = 2 * da + 1 if uses_a else 0
    big_b = 2 * db + 1 if two else 0
    conds = [
        (j, k)
        for j in range(big_a + 1)
        for k in range(big_b + 1)
        if j > da or k > db
    ]
    for (j, k) in conds:
        coeff(j, k)

    def product_coeff(i: int, j: int, k: int, z: Mapping[tuple[int, int], Fraction]) -> Fraction:
        acc = Fraction(0)
        for (p, q), zc in z.items():
            if p <= j and q <= k and zc:
                acc += zc * coeff(j - p, k - q)[i]
        return acc

    z: dict[tuple[int, int], Fraction] = {(0, 0): Fraction(1)}
    if unknowns:
        # Incremental elimination over condition rows until the system is square-solvable.
        index = {e: t for t, e in enumerate(unknowns)}
        echelon: list[tuple[int, list[Fraction], Fraction]] = []
        lead_cols: set[int] = set()
        full = len(unknowns)
        for i in range(n):
            for (j, k) in conds:
                row = [Fraction(0)] * full
                for (p, q), t in index.items():
                    if p <= j and q <= k:
                        row[t] = coeff(j - p, k - q)[i]
                rhs = -coeff(j, k)[i]
                for lc, erow, erhs in echelon:
                    if row[lc]:
                        f = row[lc] / erow[lc]
                        row = [x - f * y for x, y in zip(row, erow)]
                        rhs -= f * erhs
                lc = next((t for t, x in enumerate(row) if x), None)
                if lc is None:
                    if rhs:
                        return None
                    continue
                echelon.append((lc, row, rhs))
                lead_cols.add(lc)
                if len(echelon) == full:
                    break
            if len(echelon) == full:
                break
        if len(echelon) < full:
            return None
        sol = [Fraction(0)] * full
        for lc, erow, erhs in sorted(echelon, key=lambda t: -t[0]):
            acc = erhs
            for t in range(lc + 1, full):
                if erow[t]:
                    acc -= erow[t] * sol[t]
            sol[lc] = acc / erow[lc]
        for e, t in index.items():
            z[e] = sol[t]
    for i in range(n):
        for (j, k) in conds:
            if product_coeff(i, j, k, z):
                return None
    out = []
    for i in range(n):
        terms = {}
        for (j, k) in small:
            c = product_coeff(i, j, k, z)
            if c:
                terms[(j, k)] = c
        out.append(MultiPoly(terms))
    return out
