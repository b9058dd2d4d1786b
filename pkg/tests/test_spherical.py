import random

import pytest

from lindg.complexes import cohomology
from lindg.dg import check_spherical, graded_end_ring, hom_h_dims, validate_dg_category
from lindg.field import CyclotomicField
from lindg.group import validate_strict_action
from lindg.spherical import (
    B,
    FreeModule,
    NotARootError,
    SphericalAlgebra,
    build_perf_gen,
    build_root_action,
    field_for,
    random_twisted_complex,
    reproduce_section5,
    section5_expectations,
)

Q = CyclotomicField(1)


def perf(d, F=Q):
    return build_perf_gen(SphericalAlgebra(F, d))


def test_free_module_hom_layout():
    cat = perf(2)
    M, N = FreeModule((0, 1)), FreeModule((3,))
    # unit maps in degree b - a, s-maps in degree b - a + d
    assert cat.hom(M, N).dims == {3: 1, 2: 1, 5: 1, 4: 1}
    assert cat.hom(FreeModule(()), N).dims == {}


def test_end_rank_one_d2():
    cat = perf(2)
    assert cat.hom(B, B).dims == {0: 1, 2: 1}
    s = cat.scalar_element(0, 1)
    assert cat.compose(s, s).is_zero()


@pytest.mark.parametrize("d", [1, 2, 3])
def test_b_is_spherical(d):
    assert check_spherical(perf(d), B, d)


def test_ungraded_b_is_dual_numbers():
    cat = perf(0)
    assert graded_end_ring(cat, B).dims == {0: 2}
    assert check_spherical(cat, B, 0)


@pytest.mark.parametrize("k", [-3, 0, 2])
@pytest.mark.parametrize("d", [1, 3])
def test_hom_to_shifted_generator(k, d):
    assert hom_h_dims(perf(d), B, FreeModule((k,))) == dict(sorted({k: 1, k + d: 1}.items()))


def test_composition_table():
    cat = perf(1)
    u, s = cat.scalar_element(1, 0), cat.scalar_element(0, 1)
    assert cat.compose(u, u) == u
    assert cat.compose(u, s) == s == cat.compose(s, u)
    assert cat.compose(s, s).is_zero()


def test_validates_on_mixed_modules():
    cat = perf(1)
    assert validate_dg_category(cat, [B, FreeModule((0, 2)), FreeModule((-1,))]).ok


def test_sign_action_negates_s():
    cat = perf(1)
    act = build_root_action(cat, 2)
    g = act.functor(1)
    assert g(cat.identity(B)) == cat.identity(B)
    assert g(cat.scalar_element(0, 1)) == cat.scalar_element(0, -1)


def test_order_three_root():
    K = field_for(3)
    assert K.zeta ** 3 == K.one
    act = build_root_action(perf(1, K), 3)
    assert act.group.order == 3
    assert validate_strict_action(act, [B, FreeModule((0, 1))]).ok


def test_non_root_rejected():
    with pytest.raises(NotARootError):
        build_root_action(perf(1), 2, 3)


def test_field_for():
    assert field_for(2) is Q and field_for(1) is Q
    assert field_for(4).degree == 2


@pytest.mark.parametrize("d", [1, 2])
def test_reproduce_graded(d):
    rep = reproduce_section5(d)
    assert rep["linearisation_count"] == 2
    assert [L["lambda_g"]["unit"] for L in rep["linearisations"]] == ["1", "-1"]
    assert rep["exceptional"] == {"+": True, "-": True}
    assert rep["end_h_dims"] == {"+": {0: 1}, "-": {0: 1}}
    assert rep["cross_h_dims"] == {"+-": {d: 1}, "-+": {d: 1}}
    assert rep["iso_plus_minus"]["verdict"] == "not-isomorphic"
    assert rep["iso_plus_minus"]["all_x_zero"]
    assert rep["free_beta"] is False
    assert rep["E_spherical"] and rep["hull_embedding_dims_equal"]


def test_reproduce_ungraded():
    rep = reproduce_section5(0)
    assert rep["free_beta"] is True
    assert rep["beta_pairs_verified"]
    for p in rep["beta_pairs"]:
        assert p["verdict"] == "isomorphic" and p["witness"]["x"] == "1"
        assert p["z_equals_minus_2y_over_x"]
    assert rep["iso_plus_minus"]["verdict"] == "not-isomorphic"
    assert rep["end_h_dims"] == {"+": {0: 1}, "-": {0: 1}}


def test_reproduce_order_three():
    rep = reproduce_section5(1, 3)
    assert rep["linearisation_count"] == 3
    assert {L["lambda_g"]["unit"] for L in rep["linearisations"]} == {"1", "z", "-z-1"}
    assert rep["all_linearisations_valid"]


def test_mode_mismatch():
    with pytest.raises(ValueError):
        reproduce_section5(0, mode="graded")


@pytest.mark.parametrize("d,n", [(0, 2), (1, 2), (2, 2), (1, 3)])
def test_expectations_are_met(d, n):
    rep, exp = reproduce_section5(d, n), section5_expectations(d, n)

    def sub(want, got):
        if isinstance(want, dict):
            return all(k in got and sub(v, got[k]) for k, v in want.items())
        return want == got
    assert sub(exp, rep)


@pytest.mark.parametrize("d", [0, 1, 2])
def test_random_complexes_respect_bounds(d):
    cat = perf(d)
    rng = random.Random(3)
    nontrivial = 0
    for _ in range(15):
        C = random_twisted_complex(cat, rng)
        assert 1 <= C.size <= 3
        assert all(-2 <= r <= 2 for _, r in C.items)
        nontrivial += bool(C.q)
    assert nontrivial >= 5


def test_random_complex_is_seeded():
    cat = perf(1)
    a = [random_twisted_complex(cat, random.Random(11)) for _ in range(3)]
    b = [random_twisted_complex(cat, random.Random(11)) for _ in range(3)]
    assert a == b


def test_hull_dims_of_embedded_cross_hom():
    from lindg.pretr import embed, pretr_category
    cat = perf(2)
    H = pretr_category(cat)
    assert cohomology(H.hom(embed(cat, B), embed(cat, FreeModule((1,))))).dims == {1: 1, 3: 1}
