from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from looplab.linalg import (
    KernelError,
    PolyMatrix,
    PolyVector,
    content_normalize,
    is_content_normalized,
    is_parallel,
    kernel_lifted,
    kernel_one_dim,
    rational_nullspace,
)
from looplab.poly import A, B, ZERO, MultiPoly

small = st.dictionaries(
    st.tuples(st.integers(0, 1), st.integers(0, 1)), st.integers(-3, 3), max_size=3
).map(MultiPoly)


@st.composite
def matrices_with_kernel(draw):
    """Square matrix ``[R | -R v]`` whose kernel contains ``(v, 1)``."""
    n = draw(st.integers(2, 4))
    r = [[draw(small) for _ in range(n - 1)] for _ in range(n)]
    v = [draw(small) for _ in range(n - 1)]
    last = []
    for row in r:
        acc = ZERO
        for x, y in zip(row, v):
            acc = acc + x * y
        last.append(-acc)
    rows = [row + [c] for row, c in zip(r, last)]
    return PolyMatrix.from_rows(rows), v + [MultiPoly.const(1)]


def test_kernel_of_simple_matrix():
    m = PolyMatrix.from_rows([[1, -A], [-1, A]])
    v = kernel_one_dim(m)
    assert list(v) == [A, MultiPoly.const(1)]


def test_kernel_rejects_full_rank():
    with pytest.raises(KernelError):
        kernel_one_dim(PolyMatrix.identity(3))


def test_kernel_rejects_two_dimensional_kernel():
    with pytest.raises(KernelError):
        kernel_one_dim(PolyMatrix.zeros(2, 2))


def test_content_normalize_examples():
    v = content_normalize([2 * A, MultiPoly.const(-4)])
    assert list(v) == [-A, MultiPoly.const(2)]
    v = content_normalize([Fraction(1, 2) * A, Fraction(3, 4) * B])
    assert list(v) == [2 * A, 3 * B]
    with pytest.raises(ValueError):
        content_normalize([ZERO, ZERO])


def test_rational_nullspace_example():
    basis = rational_nullspace([[1, 1, 0], [0, 1, 1]])
    assert len(basis) == 1
    assert is_parallel(basis[0], [1, -1, 1])


@given(matrices_with_kernel(), st.integers(1, 1000))
@settings(max_examples=40, deadline=None)
def test_kernel_matches_specialized_nullspace(data, scale):
    m, known = data
    try:
        v = kernel_one_dim(m)
    except KernelError:
        assume(False)
    assert (m @ v).is_zero()
    assert is_content_normalized(v)
    point = {"a": Fraction(7, 3), "b": Fraction(-5, 2)}
    assert is_parallel(v.evaluate(point), PolyVector(known).evaluate(point))
    ns = rational_nullspace(m.evaluate(point))
    if len(ns) == 1:
        assert is_parallel(ns[0], v.evaluate(point))
    # Scaling the matrix does not change the normalized kernel.
    assert list(kernel_one_dim(m.scale(scale))) == list(v)


@given(matrices_with_kernel())
@settings(max_examples=25, deadline=None)
def test_lifted_kernel_agrees_with_bareiss(data):
    m, _ = data
    try:
        v = kernel_one_dim(m)
    except KernelError:
        assume(False)
    assert list(kernel_lifted(m)) == list(v)


@given(st.lists(small, min_size=1, max_size=4))
@settings(max_examples=60, deadline=None)
def test_normalize_is_idempotent(entries):
    assume(any(not e.is_zero() for e in entries))
    once = content_normalize(entries)
    assert content_normalize(once) == once
    assert all(c.denominator == 1 for e in once for c in e.terms.values())
