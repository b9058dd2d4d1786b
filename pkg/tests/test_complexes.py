from hypothesis import given, strategies as st

import pytest

from lindg.complexes import (
    CochainComplex,
    InvalidComplexError,
    cohomology,
    euler_characteristic,
    shift_complex,
    validate_complex,
)
from lindg.field import CyclotomicField
from lindg.linalg import Matrix, zero_vector

Q = CyclotomicField(1)
I1 = Matrix.identity(Q, 1)


def test_zero_differentials_ok():
    assert validate_complex(CochainComplex(Q, {0: 2, 3: 1})).ok


def test_identity_two_term_is_ok_and_exact():
    C = CochainComplex(Q, {0: 1, 1: 1}, {0: I1})
    assert validate_complex(C).ok
    assert cohomology(C).dims == {}


def test_two_identities_flagged_at_lower_degree():
    C = CochainComplex(Q, {0: 1, 1: 1, 2: 1}, {0: I1, 1: I1})
    rep = validate_complex(C)
    assert not rep.ok
    assert rep.violations[0].startswith("degree 0")
    with pytest.raises(InvalidComplexError):
        cohomology(C)


def test_shape_mismatch_flagged():
    C = CochainComplex(Q, {0: 2, 1: 1}, {0: I1})
    assert not validate_complex(C).ok


@pytest.mark.parametrize("d", [1, 2, 5])
def test_spherical_end_complex(d):
    C = CochainComplex(Q, {0: 1, d: 1})
    assert cohomology(C).dims == {0: 1, d: 1}


def test_projection_rank_one():
    C = CochainComplex(Q, {0: 2, 1: 1}, {0: Matrix(Q, [[Q(1), Q(0)]])})
    H = cohomology(C)
    assert H.dims == {0: 1}
    (rep,) = H.reps[0]
    assert C.apply_d(0, rep) == zero_vector(Q, 1)


def test_shift_by_zero_is_identity():
    C = CochainComplex(Q, {0: 1, 1: 1}, {0: I1})
    assert shift_complex(C, 0) == C


def test_shift_signs_compose():
    C = CochainComplex(Q, {0: 1, 1: 1}, {0: I1})
    assert shift_complex(shift_complex(C, 1), 1) == shift_complex(C, 2)


def test_shift_of_identity_complex():
    C = CochainComplex(Q, {0: 1, 1: 1}, {0: I1})
    S = shift_complex(C, 1)
    assert S.dims == {-1: 1, 0: 1}
    assert S.differential(-1) == -I1
    assert cohomology(S).dims == {}


small = st.integers(-2, 2)


@st.composite
def complexes(draw):
    """Random complexes built as d = B A with A B = 0 patterns: d_k = P_k Q_k
    where consecutive products vanish by construction (block shapes)."""
    lo = draw(st.integers(-2, 2))
    length = draw(st.integers(1, 4))
    dims = {lo + i: draw(st.integers(1, 3)) for i in range(length)}
    diffs = {}
    prev = None
    for k in sorted(dims)[:-1]:
        n, m = dims[k], dims[k + 1]
        rows = [[Q(draw(small)) for _ in range(n)] for _ in range(m)]
        D = Matrix(Q, rows, n)
        if prev is not None:
            # project away the image of the previous differential
            from lindg.linalg import kernel_basis
            K = kernel_basis(prev.transpose())
            # D' = D restricted so that D' prev = 0: D' = D @ (projection onto a complement)
            if (D @ prev).is_zero():
                pass
            else:
                D = Matrix.zeros(Q, m, n) if not K.dim else _kill(D, prev)
        diffs[k] = D
        prev = D
    return CochainComplex(Q, dims, diffs)


def _kill(D, prev):
    """Replace D by D - D P where P is a projector with image = im(prev)."""
    from lindg.linalg import kernel_basis, left_inverse, rref
    n = prev.nrows
    rows, piv = rref(prev.transpose())
    basis = [tuple(r) for r in rows[:len(piv)]]
    if not basis:
        return D
    L = left_inverse(Q, basis, n)
    Bm = Matrix.from_columns(Q, basis, n)
    P = Bm @ L
    out = D - D @ P
    assert (out @ prev).is_zero()
    del kernel_basis
    return out


@given(complexes())
def test_random_complexes_valid_and_euler(C):
    assert validate_complex(C).ok
    H = cohomology(C)
    assert euler_characteristic(C.dims) == euler_characteristic(H.dims)
    for k, reps in H.reps.items():
        for r in reps:
            assert C.apply_d(k, r) == zero_vector(Q, C.dim(k + 1))


@given(complexes(), st.integers(-3, 3))
def test_shift_equivariance(C, m):
    H, Hs = cohomology(C), cohomology(shift_complex(C, m))
    assert {k + m: v for k, v in Hs.dims.items()} == H.dims
