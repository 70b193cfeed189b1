from fractions import Fraction

import pytest

from transym.linalg import (GradedSpace, LinearOp, Subspace, commutator,
                            identity, image, kernel, mat, nullspace,
                            quotient, rref, solve, subspace_equal, vec)


def test_rref_canonical():
    m = mat([[2, 4], [1, 2]])
    r, piv = rref(m)
    assert piv == (0,)
    assert r[0] == (Fraction(1), Fraction(2))


def test_nullspace_and_solve():
    m = mat([[1, 2, 3], [2, 4, 6]])
    null = nullspace(m, 3)
    assert len(null) == 2
    for v in null:
        assert all(sum(row[j] * v[j] for j in range(3)) == 0 for row in m)
    b = vec([5, 10])
    x = solve(m, b)
    assert x is not None
    assert tuple(sum(row[j] * x[j] for j in range(3)) for row in m) == b
    assert solve(m, vec([1, 0])) is None


def test_solve_echelon_least_is_deterministic():
    m = mat([[1, 1]])
    x = solve(m, vec([1]))
    assert x == solve(m, vec([1]))


def test_graded_space_and_operator():
    sp = GradedSpace({0: ("a",), 1: ("b", "c"), 2: ("d",)})
    d = LinearOp(sp, sp, 1, {0: mat([[1], [0]]), 1: mat([[1, 1]])})
    d2 = d.compose(d)
    assert not d2.is_zero()
    zero = LinearOp.zero(sp, sp, 1)
    assert commutator(zero, d).equals(
        zero.compose(d).sub(d.compose(zero)).scale(-1).scale(-1))


def test_kernel_image_quotient():
    sp = GradedSpace({0: ("a",), 1: ("b", "c")})
    d = LinearOp(sp, sp, 1, {0: mat([[1], [1]])})
    ker = kernel(d, 0)
    assert ker.dim == 0
    im = image(d, 0)
    assert im.dim == 1
    full = Subspace.full(sp, 1)
    dim, reps = quotient(full, im)
    assert dim == 1
    # representatives reduce against the image rows
    assert all(len(r) == 2 for r in reps)


def test_subspace_equal_witness():
    sp = GradedSpace({0: ("a", "b")})
    s1 = Subspace.from_vectors(sp, 0, (vec([1, 0]),))
    s2 = Subspace.from_vectors(sp, 0, (vec([0, 1]),))
    eq, wit = subspace_equal(s1, s2)
    assert not eq and wit is not None
    assert s1.contains(wit) != s2.contains(wit)
