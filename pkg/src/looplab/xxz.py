"""XXZ chain at Delta = -1/2 with diagonal boundary fields, and its trace check."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .hamiltonian import build_hamiltonian
from .links import Mode, Sector

SX = np.array([[0.0, 1.0], [1.0, 0.0]])
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SZ = np.array([[1.0, 0.0], [0.0, -1.0]])


def delta_of(a: float) -> float:
    """Angle with ``a = 3 / (1 + 2 cos delta)``; needs ``a >= 1``."""
    if a < 1:
        raise ValueError("a must be >= 1 for a real boundary angle")
    return math.acos((3.0 / a - 1.0) / 2.0)


def _site_op(op: np.ndarray, j: int, L: int) -> np.ndarray:
    """``op`` acting on site ``j`` (0-based) of an ``L``-site chain."""
    return np.kron(np.kron(np.eye(2 ** j), op), np.eye(2 ** (L - j - 1)))


def build_xxz_hd(L: int, a: float) -> np.ndarray:
    """Dense ``2^L x 2^L`` matrix of the diagonal-boundary XXZ Hamiltonian."""
    if L < 1:
        raise ValueError("L must be >= 1")
    delta = delta_of(a)
    dim = 2 ** L
    bulk = np.zeros((dim, dim), dtype=complex)
    for j in range(L - 1):
        for op, coeff in ((SX, 1.0), (SY, 1.0), (SZ, -0.5)):
            bulk += coeff * _site_op(op, j, L) @ _site_op(op, j + 1, L)
    ident = np.eye(dim)
    left = math.tan(math.pi / 6 + delta / 2) * (_site_op(SZ, 0, L) - ident)
    right = math.tan(math.pi / 6 - delta / 2) * (_site_op(SZ, L - 1, L) - ident)
    h = -0.5 * (bulk + math.sqrt(3) / 2 * (left + right)) + 0.75 * (L - 1) * ident
    if np.abs(h.imag).max() > 1e-12:
        raise ArithmeticError("Hamiltonian picked up an imaginary part")
    return np.ascontiguousarray(h.real)


def exact_trace_powers(L: int, a: Fraction | int, kmax: int) -> list[Fraction]:
    """``tr(H^k)`` for ``k = 1..kmax`` with ``H`` the one-boundary loop Hamiltonian on all link patterns."""
    h = build_hamiltonian(L, Mode.ONE, Sector.FULL).evaluate({"a": Fraction(a)})
    n = len(h)
    sparse = [[(j, v) for j, v in enumerate(row) if v] for row in h]
    power = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    out = []
    for _ in range(kmax):
        # power <- power @ h using the sparse rows of h
        nxt = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            row = power[i]
            acc = nxt[i]
            for k, pv in enumerate(row):
                if pv:
                    for j, hv in sparse[k]:
                        acc[j] += pv * hv
        power = nxt
        out.append(sum(power[i][i] for i in range(n)))
    return out


def float_trace_powers(m: np.ndarray, kmax: int) -> list[float]:
    out = []
    p = np.eye(len(m))
    for _ in range(kmax):
        p = p @ m
        out.append(float(np.trace(p)))
    return out


@dataclass(frozen=True)
class TraceCheck:
    L: int
    a: Fraction
    kmax: int
    tol: float
    exact: tuple[Fraction, ...]
    numeric: tuple[float, ...]

    @property
    def deviations(self) -> list[float]:
        out = []
        for e, x in zip(self.exact, self.numeric):
            scale = max(abs(float(e)), 1.0)
            out.append(abs(float(e) - x) / scale)
        return out

    @property
    def max_deviation(self) -> float:
        return max(self.deviations, default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tol


def spectrum_trace_check(L: int, a, kmax: int = 10, tol: float = 1e-8) -> TraceCheck:
    """Compare trace powers of the loop Hamiltonian and of the XXZ matrix.

    Equal spectra with multiplicities give equal ``tr(M^k)`` for all ``k``; the
    loop side is exact, the spin side is floating point, compared relatively.
    """
    if L > 8:
        raise ValueError("trace check is limited to L <= 8")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    a = Fraction(a)
    exact = exact_trace_powers(L, a, kmax)
    numeric = float_trace_powers(build_xxz_hd(L, float(a)), kmax)
    return TraceCheck(L, a, kmax, tol, tuple(exact), tuple(numeric))
