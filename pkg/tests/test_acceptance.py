"""Acceptance criteria 1-10, one test each.

Every test prints a single "criterion N ... PASS|FAIL" line; the lines are
repeated in the pytest terminal summary. Run standalone with
``python3 tests/test_acceptance.py`` to get just the ten lines.
"""

import random
import sys

from lindg.cli import builtin_scenarios, verify
from lindg.complexes import cohomology, validate_complex
from lindg.dg import (
    check_exceptional,
    check_spherical,
    functors_agree,
    graded_end_ring,
    strict_inverse,
    validate_dg_category,
    validate_functor,
)
from lindg.field import CyclotomicField
from lindg.group import (
    enumerate_linearisations_cyclic,
    invariant_hom_complex,
    validate_linearisation,
    validate_strict_action,
)
from lindg.linearised import (
    build_linearised_category,
    conjugated_action,
    conjugation_equivalence,
    iso_classify,
    quasi_fully_faithful_check,
)
from lindg.pretr import EmbeddingFunctor, embed, extend_action_to_hull, hull_soundness, pretr_category
from lindg.spherical import (
    B,
    BETA_PAIRS,
    FreeModule,
    ScalingFunctor,
    SphericalAlgebra,
    X_ZERO,
    beta_linearisation,
    build_perf_gen,
    build_root_action,
    random_twisted_complex,
    spherical_iso_classify,
)

Q = CyclotomicField(1)
LINES = []


def report(n, title, ok, detail):
    line = f"criterion {n:>2} [{title}]: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    LINES.append(line)
    assert ok, line


def setup(d, F=Q, n=2):
    cat = build_perf_gen(SphericalAlgebra(F, d))
    act = build_root_action(cat, n)
    return cat, act


def units(cat, f):
    U, S = cat.unit_s_parts(f)
    return U[0][0], S[0][0]


def test_criterion_01_spherical_baseline():
    seen = {}
    ok = True
    for d in (1, 2, 3):
        cat = build_perf_gen(SphericalAlgebra(Q, d))
        R = graded_end_ring(cat, B)
        s_squared = R.product((d, 0), (d, 0))
        seen[d] = R.dims
        ok &= R.dims == {0: 1, d: 1} and s_squared == {} and check_spherical(cat, B, d, R)
    report(1, "spherical baseline", ok, f"H(End B) dims {seen}, s.s = 0")


def test_criterion_02_linearisation_classification():
    ok, notes = True, []
    for d in (1, 2, 3):
        cat, act = setup(d)
        E = enumerate_linearisations_cyclic(act, B)
        vals = sorted((str(u), str(s)) for u, s in (units(cat, L.lam(1)) for L in E.linearisations))
        ok &= vals == [("-1", "0"), ("1", "0")] and all(not fd for fd in E.free_directions)
        notes.append(f"d={d}: {[v[0] for v in vals]}")
    cat, act = setup(0)
    E = enumerate_linearisations_cyclic(act, B)
    alphas = sorted(str(units(cat, L.lam(1))[0]) for L in E.linearisations)
    free = [len(fd) == 1 and units(cat, fd[0])[0] == 0 and units(cat, fd[0])[1] != 0
            for fd in E.free_directions]
    ok &= alphas == ["-1", "1"] and all(free) and len(free) == 2
    notes.append(f"ungraded: alpha {alphas}, free beta {all(free)}")
    report(2, "linearisation classification", ok, "; ".join(notes))


def test_criterion_03_beta_irrelevance():
    cat, act = setup(0)
    cg = build_linearised_category(act, [B])
    ok, notes = True, []
    for b1, b2 in BETA_PAIRS:
        L1, L2 = beta_linearisation(act, 1, Q.parse(b1)), beta_linearisation(act, 1, Q.parse(b2))
        rep = iso_classify(cg, L1, L2)
        inv = strict_inverse(cg, rep.witness) if rep.witness is not None else None
        verified = (inv is not None
                    and cg.compose(inv, rep.witness) == cg.identity(L1)
                    and cg.compose(rep.witness, inv) == cg.identity(L2))
        x, y = units(cat, cg.to_base(rep.witness)) if rep.witness is not None else (0, 0)
        ok &= rep.isomorphic and verified
        notes.append(f"({b1},{b2}) x={x} y={y}")
    report(3, "beta irrelevance", ok, "; ".join(notes))


def test_criterion_04_non_isomorphism():
    ok, notes = True, []
    for d in (0, 1, 2):
        cat, act = setup(d)
        cg = build_linearised_category(act, [B])
        Lp, Lm = enumerate_linearisations_cyclic(act, B).linearisations
        rep = spherical_iso_classify(cg, Lp, Lm)
        xs = [units(cat, cg.to_base(z))[0] for z in rep.family]
        ok &= (rep.verdict == "not-isomorphic" and rep.obstruction.startswith(X_ZERO)
               and all(x == 0 for x in xs))
        notes.append(f"d={d}: {rep.verdict}")
    report(4, "non-isomorphism", ok, "; ".join(notes) + f"; obstruction '{X_ZERO}'")


def test_criterion_05_exceptionality():
    ok, notes = True, []
    for d in (1, 2):
        cat, act = setup(d)
        cg = build_linearised_category(act, [B])
        Lp, Lm = enumerate_linearisations_cyclic(act, B).linearisations
        exc = check_exceptional(cg, Lp) and check_exceptional(cg, Lm)
        ends = [cohomology(cg.hom(L, L)).dims for L in (Lp, Lm)]
        cross = [cohomology(cg.hom(a, b)).dims for a, b in ((Lp, Lm), (Lm, Lp))]
        ok &= exc and ends == [{0: 1}] * 2 and cross == [{d: 1}] * 2
        notes.append(f"d={d}: End {ends[0]}, cross {cross[0]}")
    report(5, "exceptionality", ok, "; ".join(notes))


def test_criterion_06_larger_n():
    K = CyclotomicField(3)
    cat, act = setup(1, K, 3)
    E = enumerate_linearisations_cyclic(act, B)
    vals = {units(cat, L.lam(1))[0] for L in E.linearisations}
    valid = all(validate_linearisation(act, L).ok for L in E.linearisations)
    ok = len(E.linearisations) == 3 and vals == {K.one, K.zeta, K.zeta ** 2} and valid
    report(6, "larger n", ok, f"{len(E.linearisations)} linearisations {sorted(map(str, vals))}, "
                              f"all valid {valid}")


def test_criterion_07_hull_soundness():
    rng = random.Random(20240607)
    count, failures, nontrivial = 0, [], 0
    for d in (0, 1, 2, 3):
        cat, act = setup(d)
        H = pretr_category(cat)
        hact = extend_action_to_hull(act, H)
        for _ in range(15):
            C = random_twisted_complex(cat, rng, max_items=3, shift_range=(-2, 2))
            assert C.size <= 3 and all(-2 <= r <= 2 for _, r in C.items)
            count += 1
            nontrivial += bool(C.q)
            failures += [f"d={d} {H.describe(C)}: {f}" for f in hull_soundness(H, C, hact, rng)]
    ok = count >= 50 and not failures
    report(7, "hull soundness", ok,
           f"{count} random twisted complexes ({nontrivial} with q != 0), "
           f"{len(failures)} failures" + (f": {failures[0]}" if failures else ""))


def test_criterion_08_linearised_category_is_dg():
    ok, checked, complexes = True, 0, 0
    for d in (0, 1, 2):
        cat, act = setup(d)
        cg = build_linearised_category(act, [B])
        sample = list(enumerate_linearisations_cyclic(act, B).linearisations)
        if d == 0:
            sample += [beta_linearisation(act, 1, Q(b)) for b in (1, -2)]
        for a in sample:
            for b in sample:
                complexes += 1
                ok &= validate_complex(invariant_hom_complex(act, a, b).complex).ok
        rep = validate_dg_category(cg, sample)
        checked += rep.checked
        ok &= rep.ok
    report(8, "A^G is a DG-category", ok,
           f"{complexes} invariant hom complexes valid, {checked} category checks")


def test_criterion_09_functoriality():
    ok, notes = True, []
    for d in (1, 2):
        cat, act = setup(d)
        cg = build_linearised_category(act, [B])
        Ls = enumerate_linearisations_cyclic(act, B).linearisations
        H = pretr_category(cg)
        equal = all(H.hom(embed(cg, a), embed(cg, b)) == cg.hom(a, b) for a in Ls for b in Ls)
        qff = quasi_fully_faithful_check(EmbeddingFunctor(H), Ls).ok
        ok &= equal and qff
        conj_ok = True
        for c in (2, 3):
            Phi, Pinv = ScalingFunctor(cat, c), ScalingFunctor(cat, Q(1) / c)
            conj = conjugated_action(Phi, Pinv, act, [B])
            sample = [B, FreeModule((0, 1))]
            same = all(functors_agree(conj.functor(g), act.functor(g), sample).ok
                       for g in act.group.elements)
            F = conjugation_equivalence(Phi, Pinv, act, conj, [B], cg)
            images = [F.obj(L) for L in Ls]
            conj_ok &= (same and validate_strict_action(conj, sample).ok
                        and validate_functor(F, Ls).ok
                        and quasi_fully_faithful_check(F, Ls).ok
                        and len(set(images)) == len(Ls)
                        and all(validate_linearisation(conj, L).ok for L in images))
        ok &= conj_ok
        notes.append(f"d={d}: embedding equal homs {equal}, qff {qff}, conjugation c=2,3 {conj_ok}")
    report(9, "functoriality", ok, "; ".join(notes))


def test_criterion_10_determinism():
    names = [n for n in builtin_scenarios() if n.startswith("section5-")]
    same, codes = True, []
    for n in names:
        a, b = verify(n, "machine", 0), verify(n, "machine", 0)
        same &= a == b
        codes.append(a[0])
    ok = bool(names) and same and all(c == 0 for c in codes)
    report(10, "determinism", ok, f"{len(names)} shipped scenarios, byte-identical {same}, "
                                  f"exit codes {codes}")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
