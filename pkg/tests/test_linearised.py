import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lindg.complexes import cohomology, validate_complex
from lindg.dg import (
    IdentityFunctor,
    PreconditionError,
    check_exceptional,
    functors_agree,
    h0_is_isomorphism,
    validate_dg_category,
    validate_functor,
)
from lindg.field import CyclotomicField
from lindg.group import (
    enumerate_linearisations_cyclic,
    linearisation_from_generator,
    validate_linearisation,
    validate_strict_action,
)
from lindg.linearised import (
    ConstructionError,
    StrictAction,
    build_linearised_category,
    conjugated_action,
    conjugation_equivalence,
    induced_functor,
    iso_classify,
    quasi_fully_faithful_check,
)
from lindg.group import FiniteGroup
from lindg.spherical import (
    B,
    FreeModule,
    ScalingFunctor,
    SphericalAlgebra,
    beta_linearisation,
    build_perf_gen,
    build_root_action,
    spherical_iso_classify,
    X_ZERO,
)

Q = CyclotomicField(1)


def setup(d, F=Q, n=2):
    cat = build_perf_gen(SphericalAlgebra(F, d))
    act = build_root_action(cat, n)
    cg = build_linearised_category(act, [B])
    Ls = enumerate_linearisations_cyclic(act, B).linearisations
    return cat, act, cg, Ls


def plus_minus(cat, Ls):
    sign = {str(cat.unit_s_parts(L.lam(1))[0][0][0]): L for L in Ls}
    return sign["1"], sign["-1"]


# --- the category A^G --------------------------------------------------------

def test_trivial_group_homs_match_base():
    cat = build_perf_gen(SphericalAlgebra(Q, 2))
    act = build_root_action(cat, 1, 1)
    cg = build_linearised_category(act)
    L = linearisation_from_generator(act, B, cat.identity(B))
    assert cg.hom(L, L).dims == cat.hom(B, B).dims


@pytest.mark.parametrize("d", [0, 1, 2, 3])
def test_linearised_category_is_dg(d):
    cat, act, cg, Ls = setup(d)
    assert validate_dg_category(cg, Ls).ok
    for a, b in itertools.product(Ls, repeat=2):
        assert validate_complex(cg.hom(a, b)).ok


def test_invalid_action_is_rejected():
    K = CyclotomicField(3)
    cat = build_perf_gen(SphericalAlgebra(K, 1))
    z = K.zeta
    bad = StrictAction(FiniteGroup.cyclic(3), cat,
                       {0: ScalingFunctor(cat, 1), 1: ScalingFunctor(cat, z), 2: ScalingFunctor(cat, z)})
    with pytest.raises(ConstructionError):
        build_linearised_category(bad, [B])


@pytest.mark.parametrize("d", [1, 2])
def test_end_and_cross_dims(d):
    cat, act, cg, Ls = setup(d)
    Lp, Lm = plus_minus(cat, Ls)
    assert cohomology(cg.hom(Lp, Lp)).dims == {0: 1}
    assert cohomology(cg.hom(Lp, Lm)).dims == {d: 1}
    assert check_exceptional(cg, Lp) and check_exceptional(cg, Lm)


def test_composition_of_invariants_is_invariant():
    cat, act, cg, Ls = setup(2)
    Lp, Lm = plus_minus(cat, Ls)
    f = cg.basis_morphism(Lp, Lm, 2, 0)
    g = cg.basis_morphism(Lm, Lp, 2, 0)
    assert cg.compose(g, f).is_zero()
    h = cg.compose(cg.identity(Lm), f)
    assert cg.to_base(h) == cg.to_base(f)


def test_retract_refuses_non_invariant():
    cat, act, cg, Ls = setup(1)
    Lp, _ = plus_minus(cat, Ls)
    s = cat.scalar_element(0, 1)
    with pytest.raises(ValueError):
        cg.from_base(Lp, Lp, s)


# --- isomorphism classification ---------------------------------------------

@pytest.mark.parametrize("d", [0, 1, 2])
def test_reflexive(d):
    cat, act, cg, Ls = setup(d)
    for L in Ls:
        rep = iso_classify(cg, L, L)
        assert rep.isomorphic and rep.witness == cg.identity(L)


@pytest.mark.parametrize("d", [0, 1, 2, 3])
def test_plus_minus_not_isomorphic(d):
    cat, act, cg, Ls = setup(d)
    Lp, Lm = plus_minus(cat, Ls)
    for a, b in ((Lp, Lm), (Lm, Lp)):
        rep = spherical_iso_classify(cg, a, b)
        assert rep.verdict == "not-isomorphic"
        assert rep.obstruction.startswith(X_ZERO)
        for z in rep.family:
            assert cat.unit_s_parts(cg.to_base(z))[0][0][0] == 0


BETAS = st.fractions(-4, 4, max_denominator=3)


@given(BETAS, BETAS)
def test_beta_irrelevance(b1, b2):
    cat = build_perf_gen(SphericalAlgebra(Q, 0))
    act = build_root_action(cat, 2)
    cg = build_linearised_category(act, [B])
    L1, L2 = beta_linearisation(act, 1, b1), beta_linearisation(act, 1, b2)
    assert validate_linearisation(act, L1).ok and validate_linearisation(act, L2).ok
    rep = iso_classify(cg, L1, L2)
    assert rep.isomorphic and rep.strict
    assert cg.compose(rep.inverse, rep.witness) == cg.identity(L1)
    assert cg.compose(rep.witness, rep.inverse) == cg.identity(L2)
    (x,), (y,) = (row for rows in cat.unit_s_parts(cg.to_base(rep.witness)) for row in rows)
    # lambda' f = g^*(f) lambda forces z = beta' - beta = -2y/x in our convention
    assert Q(b2) - Q(b1) == -2 * y / x
    # symmetry of the verdict
    assert iso_classify(cg, L2, L1).isomorphic


def test_beta_families_with_opposite_alpha_stay_apart():
    cat = build_perf_gen(SphericalAlgebra(Q, 0))
    act = build_root_action(cat, 2)
    cg = build_linearised_category(act, [B])
    for b1, b2 in [(0, 0), (1, Fraction(1, 2)), (-3, 2)]:
        rep = spherical_iso_classify(cg, beta_linearisation(act, 1, b1), beta_linearisation(act, -1, b2))
        assert rep.verdict == "not-isomorphic"


def test_witness_passes_h0_check():
    cat = build_perf_gen(SphericalAlgebra(Q, 0))
    act = build_root_action(cat, 2)
    cg = build_linearised_category(act, [B])
    rep = iso_classify(cg, beta_linearisation(act, 1, 0), beta_linearisation(act, 1, 5))
    assert h0_is_isomorphism(cg, rep.witness)[0]


def test_unknown_when_family_too_large():
    # trivial Z/2 action; two conjugate transpositions on a rank-3 module have
    # equal End dims and a 5-dimensional space of intertwiners
    cat = build_perf_gen(SphericalAlgebra(Q, 1))
    act = build_root_action(cat, 2, 1)
    cg = build_linearised_category(act)
    B3 = FreeModule((0, 0, 0))
    P = cat.element(B3, B3, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    P2 = cat.element(B3, B3, [[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    L, L2 = (linearisation_from_generator(act, B3, p) for p in (P, P2))
    assert validate_linearisation(act, L).ok and validate_linearisation(act, L2).ok
    rep = iso_classify(cg, L, L2)
    assert rep.verdict == "unknown" and len(rep.family) == 5


def test_differing_end_dims_obstruction():
    cat, act, cg, Ls = setup(1)
    Lp, _ = plus_minus(cat, Ls)
    from lindg.group import inflate
    I = inflate(act, B)
    rep = iso_classify(cg, Lp, I)
    assert rep.verdict == "not-isomorphic" and "H dims differ" in rep.obstruction


# --- induced functors ---------------------------------------------------------

def test_identity_induces_identity():
    cat, act, cg, Ls = setup(1)
    I = induced_functor(IdentityFunctor(cat), act, act, [B], cg, cg)
    assert all(I.obj(L) == L for L in Ls)
    assert functors_agree(I, IdentityFunctor(cg), Ls).ok
    assert quasi_fully_faithful_check(I, Ls).ok


@pytest.mark.parametrize("d", [1, 2])
def test_acting_element_induces_valid_functor(d):
    cat, act, cg, Ls = setup(d)
    Phi = act.functor(1)
    I = induced_functor(Phi, act, act, [B], cg, cg)
    for L in Ls:
        assert validate_linearisation(act, I.obj(L)).ok
    assert validate_functor(I, Ls).ok


def test_non_equivariant_functor_rejected():
    cat, act, cg, Ls = setup(1)
    triv = build_root_action(cat, 2, 1)
    with pytest.raises(PreconditionError):
        induced_functor(IdentityFunctor(cat), act, triv, [B])


def test_induced_respects_composition():
    cat, act, cg, Ls = setup(2)
    P2, P3 = ScalingFunctor(cat, 2), ScalingFunctor(cat, 3)
    I2 = induced_functor(P2, act, act, [B], cg, cg)
    I3 = induced_functor(P3, act, act, [B], cg, cg)
    I6 = induced_functor(P2.then(P3), act, act, [B], cg, cg)
    assert functors_agree(I2.then(I3), I6, Ls).ok


@pytest.mark.parametrize("d", [0, 1, 2])
def test_collapse_fails_qff(d):
    cat = build_perf_gen(SphericalAlgebra(Q, d))
    rep = quasi_fully_faithful_check(ScalingFunctor(cat, 0), [B])
    assert not rep.ok
    assert rep.entries[0].bijective[d] is False
    assert rep.failures[0].startswith(f"H^{d} ")


def test_star_condition_instance_trivial_group():
    # trivial group: (*) holds everywhere; phi_c is a quasi-equivalence, so Phi^G is qff
    cat = build_perf_gen(SphericalAlgebra(Q, 1))
    act = build_root_action(cat, 1, 1)
    cg = build_linearised_category(act)
    L = linearisation_from_generator(act, B, cat.identity(B))
    I = induced_functor(ScalingFunctor(cat, 5), act, act, [B], cg, cg)
    assert quasi_fully_faithful_check(I, [L]).ok


# --- conjugation --------------------------------------------------------------

def test_conjugation_by_identity():
    cat, act, cg, Ls = setup(1)
    I = IdentityFunctor(cat)
    conj = conjugated_action(I, I, act, [B])
    for g in act.group.elements:
        assert functors_agree(conj.functor(g), act.functor(g), [B]).ok
    F = conjugation_equivalence(I, I, act, conj, [B], cg)
    assert all(F.obj(L) == L for L in Ls)


@pytest.mark.parametrize("c", [2, 3, Fraction(-1, 2)])
def test_conjugation_by_scalar(c):
    cat, act, cg, Ls = setup(1)
    Phi, Pinv = ScalingFunctor(cat, c), ScalingFunctor(cat, 1 / Q(c))
    conj = conjugated_action(Phi, Pinv, act, [B])
    assert validate_strict_action(conj, [B, FreeModule((0, 1))]).ok
    for g in act.group.elements:
        assert functors_agree(conj.functor(g), act.functor(g), [B, FreeModule((0, 1))]).ok
    F = conjugation_equivalence(Phi, Pinv, act, conj, [B], cg)
    assert validate_functor(F, Ls).ok
    assert quasi_fully_faithful_check(F, Ls).ok
    images = [F.obj(L) for L in Ls]
    assert len(set(images)) == len(Ls)
    assert all(validate_linearisation(conj, L).ok for L in images)


def test_non_strict_inverse_rejected():
    cat, act, cg, Ls = setup(1)
    with pytest.raises(PreconditionError):
        conjugated_action(ScalingFunctor(cat, 2), ScalingFunctor(cat, 2), act, [B])
