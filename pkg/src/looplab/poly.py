"""Exact multivariate polynomials in the boundary fugacities ``a`` and ``b``.

Coefficients are :class:`fractions.Fraction` values, so every operation is
exact.  Terms are keyed by exponent pairs ``(j, k)`` meaning ``a**j * b**k``.
The canonical term order is graded lexicographic with ``a`` before ``b``;
it is used for rendering and for choosing pivots deterministically.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

VARIABLES = ("a", "b")

Exponent = tuple[int, int]
Scalar = Union[int, Fraction]


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact scalar: {c!r}")


def grlex_key(e: Exponent) -> tuple[int, int]:
    """Sort key placing higher graded-lex exponents first."""
    return (-(e[0] + e[1]), -e[0])


def lex_key(e: Exponent) -> tuple[int, int]:
    return (-e[0], -e[1])


class MultiPoly:
    """Immutable polynomial in ``a``, ``b`` with exact rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, Scalar] | None = None):
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for e, c in terms.items():
                c = _as_fraction(c)
                if c:
                    if len(e) != 2 or e[0] < 0 or e[1] < 0:
                        raise ValueError(f"bad exponent {e!r}")
                    clean[(int(e[0]), int(e[1]))] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Exponent, Fraction]) -> "MultiPoly":
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Scalar) -> "MultiPoly":
        return cls({(0, 0): c})

    @classmethod
    def var(cls, name: str) -> "MultiPoly":
        if name == "a":
            return cls({(1, 0): 1})
        if name == "b":
            return cls({(0, 1): 1})
        raise ValueError(f"unknown variable {name!r}; expected one of {VARIABLES}")

    @classmethod
    def coerce(cls, x) -> "MultiPoly":
        if isinstance(x, MultiPoly):
            return x
        if isinstance(x, str):
            return cls.parse(x)
        return cls.const(x)

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in canonical (graded lex) order."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(e == (0, 0) for e in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get((0, 0), Fraction(0))

    def coefficient(self, j: int, k: int = 0) -> Fraction:
        return self._terms.get((j, k), Fraction(0))

    @property
    def variables(self) -> tuple[str, ...]:
        used = [False, False]
        for e in self._terms:
            used[0] |= e[0] > 0
            used[1] |= e[1] > 0
        return tuple(v for v, u in zip(VARIABLES, used) if u)

    def degree(self, var: str | None = None) -> int:
        """Degree in ``var`` (total degree if omitted); ``-1`` for zero."""
        if not self._terms:
            return -1
        if var is None:
            return max(j + k for j, k in self._terms)
        idx = VARIABLES.index(var)
        return max(e[idx] for e in self._terms)

    def leading_term(self, order=lex_key) -> tuple[Exponent, Fraction]:
        e = min(self._terms, key=order)
        return e, self._terms[e]

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> "MultiPoly":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw({e: -c for e, c in self._terms.items()})

    def __pos__(self) -> "MultiPoly":
        return self

    def __sub__(self, other) -> "MultiPoly":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MultiPoly":
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return MultiPoly._raw({e: c * other for e, c in self._terms.items()})
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        out: dict[Exponent, Fraction] = {}
        for (j1, k1), c1 in self._terms.items():
            for (j2, k2), c2 in other._terms.items():
                e = (j1 + j2, k1 + k2)
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("polynomial division by zero")
            inv = 1 / Fraction(other)
            return self * inv
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self.exact_div(other)

    def divmod(self, divisor: "MultiPoly") -> tuple["MultiPoly", "MultiPoly"]:
        """Multivariate division with respect to lex order (``a > b``)."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        (dj, dk), dc = divisor.leading_term()
        rem = dict(self._terms)
        quot: dict[Exponent, Fraction] = {}
        left: dict[Exponent, Fraction] = {}
        while rem:
            e = min(rem, key=lex_key)
            c = rem[e]
            if e[0] >= dj and e[1] >= dk:
                qe = (e[0] - dj, e[1] - dk)
                qc = c / dc
                quot[qe] = quot.get(qe, 0) + qc
                for (j, k), cc in divisor._terms.items():
                    t = (j + qe[0], k + qe[1])
                    v = rem.get(t, 0) - qc * cc
                    if v:
                        rem[t] = v
                    else:
                        rem.pop(t, None)
            else:
                left[e] = c
                del rem[e]
        return MultiPoly(quot), MultiPoly._raw(left)

    def exact_div(self, divisor: "MultiPoly") -> "MultiPoly":
        q, r = self.divmod(divisor)
        if r:
            raise ArithmeticError(f"({self}) is not divisible by ({divisor})")
        return q

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == MultiPoly.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- calculus and evaluation -----------------------------------------

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        """Exact value at ``point``; every occurring variable must be assigned."""
        for v in self.variables:
            if v not in point:
                raise KeyError(f"no value assigned to variable {v!r}")
        av = _as_fraction(point["a"]) if "a" in self.variables else Fraction(0)
        bv = _as_fraction(point["b"]) if "b" in self.variables else Fraction(0)
        total = Fraction(0)
        for (j, k), c in self._terms.items():
            total += c * (av ** j) * (bv ** k)
        return total

    def __call__(self, **point) -> Fraction:
        return self.evaluate(point)

    def partial_eval(self, var: str, value: Scalar) -> "MultiPoly":
        """Substitute a number for one variable, keeping the other symbolic."""
        value = _as_fraction(value)
        idx = VARIABLES.index(var)
        out: dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            ne = (0, e[1]) if idx == 0 else (e[0], 0)
            out[ne] = out.get(ne, 0) + c * value ** e[idx]
        return MultiPoly(out)

    def derivative(self, var: str = "a") -> "MultiPoly":
        idx = VARIABLES.index(var)
        out = {}
        for e, c in self._terms.items():
            if e[idx]:
                ne = (e[0] - 1, e[1]) if idx == 0 else (e[0], e[1] - 1)
                out[ne] = c * e[idx]
        return MultiPoly._raw(out)

    def shift(self, da: Scalar = 0, db: Scalar = 0) -> "MultiPoly":
        """Return ``p(a + da, b + db)``."""
        a = MultiPoly({(1, 0): 1, (0, 0): da})
        b = MultiPoly({(0, 1): 1, (0, 0): db})
        apow = [ONE]
        bpow = [ONE]
        out = ZERO
        for (j, k), c in self._terms.items():
            while len(apow) <= j:
                apow.append(apow[-1] * a)
            while len(bpow) <= k:
                bpow.append(bpow[-1] * b)
            out = out + apow[j] * bpow[k] * c
        return out

    # -- content ----------------------------------------------------------

    def content(self) -> Fraction:
        """Positive rational ``c`` such that ``self / c`` has coprime integer coefficients."""
        return rational_content(self._terms.values())

    def primitive(self) -> "MultiPoly":
        if not self._terms:
            return self
        return self * (1 / self.content())

    # -- text -------------------------------------------------------------

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"MultiPoly('{render(self)}')"

    @classmethod
    def parse(cls, text: str) -> "MultiPoly":
        return parse(text)


def _coerce_or_none(x) -> MultiPoly | None:
    if isinstance(x, MultiPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return MultiPoly.const(x)
    return None


ZERO = MultiPoly()
ONE = MultiPoly.const(1)
A = MultiPoly.var("a")
B = MultiPoly.var("b")


def rational_content(coeffs: Iterable[Fraction]) -> Fraction:
    """gcd of numerators over lcm of denominators (positive); 0 for no coefficients."""
    num = 0
    den = 1
    for c in coeffs:
        c = _as_fraction(c)
        num = math.gcd(num, c.numerator)
        den = den * c.denominator // math.gcd(den, c.denominator)
    if num == 0:
        return Fraction(0)
    return Fraction(num, den)


# -- canonical text format ------------------------------------------------

def _monomial(j: int, k: int) -> str:
    parts = []
    if j:
        parts.append("a" if j == 1 else f"a^{j}")
    if k:
        parts.append("b" if k == 1 else f"b^{k}")
    return "*".join(parts)


def render(p: MultiPoly) -> str:
    """Canonical text, e.g. ``3*a^2*b + 2*a + 4``; zero renders as ``0``."""
    items = p.items()
    if not items:
        return "0"
    out = []
    for n, ((j, k), c) in enumerate(items):
        neg = c < 0
        mag = -c if neg else c
        mono = _monomial(j, k)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{mag}*{mono}"
        else:
            body = str(mag)
        if n == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


_TERM_RE = re.compile(
    r"^(?:(?P<coef>\d+(?:/\d+)?)(?:\*|$))?(?P<mono>(?:[ab](?:\^\d+)?)(?:\*[ab](?:\^\d+)?)*)?$"
)


def parse(text: str) -> MultiPoly:
    """Parse the canonical text format (and harmless variations in spacing)."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial text")
    if s[0] not in "+-":
        s = "+" + s
    chunks = re.findall(r"[+-][^+-]+", s)
    if "".join(chunks) != s:
        raise ValueError(f"cannot parse polynomial {text!r}")
    terms: dict[Exponent, Fraction] = {}
    for chunk in chunks:
        sign = -1 if chunk[0] == "-" else 1
        m = _TERM_RE.match(chunk[1:])
        if not m or not (m.group("coef") or m.group("mono")):
            raise ValueError(f"cannot parse term {chunk!r} in {text!r}")
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        j = k = 0
        if m.group("mono"):
            for factor in m.group("mono").split("*"):
                name, _, exp = factor.partition("^")
                e = int(exp) if exp else 1
                if name == "a":
                    j += e
                else:
                    k += e
        terms[(j, k)] = terms.get((j, k), 0) + sign * coef
    return MultiPoly(terms)


# -- gcd --------------------------------------------------------------------

def _univariate_gcd(p: MultiPoly, q: MultiPoly, var: str) -> MultiPoly:
    idx = VARIABLES.index(var)

    def coeffs(x: MultiPoly) -> list[Fraction]:
        d = x.degree(var)
        out = [Fraction(0)] * (d + 1)
        for e, c in x.terms.items():
            out[e[idx]] = c
        return out

    f, g = coeffs(p), coeffs(q)
    while g and any(g):
        while g and not g[-1]:
            g.pop()
        if not g:
            break
        r = f[:]
        lead = g[-1]
        while len(r) >= len(g) and any(r):
            factor = r[-1] / lead
            shift = len(r) - len(g)
            for i, c in enumerate(g):
                r[shift + i] -= factor * c
            r.pop()
            while r and not r[-1]:
                r.pop()
        f, g = g, r
    while f and not f[-1]:
        f.pop()
    if idx == 0:
        return MultiPoly({(i, 0): c for i, c in enumerate(f)})
    return MultiPoly({(0, i): c for i, c in enumerate(f)})


def _as_poly_in_b(p: MultiPoly) -> dict[int, MultiPoly]:
    out: dict[int, dict[Exponent, Fraction]] = {}
    for (j, k), c in p.terms.items():
        out.setdefault(k, {})[(j, 0)] = c
    return {k: MultiPoly(t) for k, t in out.items()}


def _from_poly_in_b(coeffs: Mapping[int, MultiPoly]) -> MultiPoly:
    out: dict[Exponent, Fraction] = {}
    for k, c in coeffs.items():
        for (j, _), v in c.terms.items():
            out[(j, k)] = v
    return MultiPoly(out)


def _normalize_gcd(g: MultiPoly) -> MultiPoly:
    if g.is_zero():
        return g
    g = g.primitive()
    _, lc = min(g.terms.items(), key=lambda t: grlex_key(t[0]))
    return -g if lc < 0 else g


def poly_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Greatest common divisor, primitive over the integers with positive leading coefficient."""
    if p.is_zero():
        return _normalize_gcd(q)
    if q.is_zero():
        return _normalize_gcd(p)
    used = set(p.variables) | set(q.variables)
    if not used:
        return ONE
    if used == {"a"} or used == {"b"}:
        (var,) = used
        return _normalize_gcd(_univariate_gcd(p, q, var))
    if "b" not in p.variables or "b" not in q.variables:
        # gcd with a polynomial free of b divides the b-content of the other.
        free, other = (p, q) if "b" not in p.variables else (q, p)
        g = free
        for c in _as_poly_in_b(other).values():
            g = poly_gcd(g, c)
            if g.is_constant():
                return ONE
        return _normalize_gcd(g)
    # Primitive remainder sequence in b over Q[a].
    pc, pp = _b_content(p)
    qc, qq = _b_content(q)
    cont = poly_gcd(pc, qc)
    f, g = pp, qq
    if f.degree("b") < g.degree("b"):
        f, g = g, f
    while not g.is_zero() and g.degree("b") > 0:
        r = _pseudo_rem_b(f, g)
        if r.is_zero():
            break
        _, r = _b_content(r)
        f, g = g, r
    if g.is_zero():
        res = f
    elif g.degree("b") == 0:
        res = ONE
    else:
        res = g
    _, res = _b_content(res)
    return _normalize_gcd(cont * res)


def _b_content(p: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    coeffs = _as_poly_in_b(p)
    c = ZERO
    for v in coeffs.values():
        c = poly_gcd(c, v)
        if c.is_constant():
            c = ONE
            break
    if c.is_constant():
        return ONE, p.primitive()
    return c, _from_poly_in_b({k: v.exact_div(c) for k, v in coeffs.items()})


def _pseudo_rem_b(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    fc = _as_poly_in_b(f)
    gc = _as_poly_in_b(g)
    dg = max(gc)
    lg = gc[dg]
    while fc and max(fc) >= dg:
        df = max(fc)
        lf = fc[df]
        shift = df - dg
        new: dict[int, MultiPoly] = {}
        for k, v in fc.items():
            new[k] = v * lg
        for k, v in gc.items():
            new[k + shift] = new.get(k + shift, ZERO) - v * lf
        fc = {k: v for k, v in new.items() if not v.is_zero()}
    return _from_poly_in_b(fc)


def gcd_many(polys: Iterable[MultiPoly]) -> MultiPoly:
    g = ZERO
    for p in polys:
        g = poly_gcd(g, p)
        if g == ONE:
            break
    return g
