from fractions import Fraction

from hypothesis import given, strategies as st

from lindg.field import CyclotomicField
from lindg.linalg import (
    Matrix,
    Subspace,
    kernel_basis,
    left_inverse,
    quotient_data,
    rank,
    solve_linear,
    unit_vector,
    zero_vector,
)

Q = CyclotomicField(1)


def M(rows, ncols=None):
    return Matrix(Q, [[Q(x) for x in r] for r in rows], ncols)


def v(*xs):
    return tuple(Q(x) for x in xs)


def test_kernel_of_identity_is_zero():
    assert kernel_basis(Matrix.identity(Q, 3)).dim == 0


def test_kernel_of_rank_one():
    K = kernel_basis(M([[1, 1], [1, 1]]))
    assert K.dim == 1
    (b,) = K.basis
    assert b[0] == -b[1] != 0


def test_kernel_of_zero_1x1():
    assert kernel_basis(M([[0]])).basis == (v(1),)


def test_solve_identity():
    assert solve_linear(Matrix.identity(Q, 2), v(3, 5)) == v(3, 5)


def test_solve_underdetermined_sets_free_to_zero():
    x = solve_linear(M([[1, 1]]), v(2))
    assert x == v(2, 0)


def test_solve_inconsistent():
    assert solve_linear(M([[1], [1]]), v(1, 2)) is None


def test_quotient_of_zero_subspace():
    reps, P = quotient_data(Subspace(2, ()), 2, Q)
    assert reps == (v(1, 0), v(0, 1))
    assert P == Matrix.identity(Q, 2)


def test_quotient_by_diagonal():
    reps, P = quotient_data(Subspace(2, (v(1, 1),)), 2, Q)
    assert len(reps) == 1
    assert P.apply(v(1, 1)) == v(0)
    assert P.apply(reps[0]) == v(1)


def test_quotient_by_everything():
    reps, P = quotient_data(Subspace(2, (v(1, 0), v(0, 1))), 2, Q)
    assert reps == () and P.shape == (0, 2)


def test_works_over_cyclotomic_entries():
    K = CyclotomicField(3)
    z = K.zeta
    A = Matrix(K, [[z, z * z], [1, z]])
    # det = z^2 - z^2 = 0
    assert rank(A) == 1
    (b,) = kernel_basis(A).basis
    assert A.apply(b) == zero_vector(K, 2)


small = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def matrices(draw, max_dim=5):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    rows = draw(st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    return Matrix(Q, [[Q(x) for x in row] for row in rows], c)


@given(matrices())
def test_rank_nullity(A):
    assert rank(A) + kernel_basis(A).dim == A.ncols
    for b in kernel_basis(A).basis:
        assert A.apply(b) == zero_vector(Q, A.nrows)


@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solutions_are_exact(A, xs):
    x0 = tuple(Q(x) for x in xs[:A.ncols])
    b = A.apply(x0)
    x = solve_linear(A, b)
    assert x is not None and A.apply(x) == b


@given(matrices())
def test_quotient_contracts(A):
    n = A.ncols
    K = kernel_basis(A)
    reps, P = quotient_data(K, n, Q)
    assert len(reps) + K.dim == n
    for b in K.basis:
        assert P.apply(b) == zero_vector(Q, len(reps))
    for i, r in enumerate(reps):
        assert P.apply(r) == unit_vector(Q, len(reps), i)


@given(matrices())
def test_left_inverse(A):
    K = kernel_basis(A)
    if not K.dim:
        return
    L = left_inverse(Q, K.basis, A.ncols)
    assert L @ Matrix.from_columns(Q, K.basis, A.ncols) == Matrix.identity(Q, K.dim)


def test_pivoting_is_deterministic():
    A = M([[0, 2, 4], [1, Fraction(1, 2), 0]])
    assert kernel_basis(A).basis == kernel_basis(A).basis
    assert solve_linear(A, v(2, 1)) == solve_linear(A, v(2, 1))
