"""Acceptance criteria, one test each.  All comparisons are exact."""
import random
import time
from fractions import Fraction as F

from cfk11 import (FamilySpec, alexander_polynomial, build_arrangement, build_family, d_squared_check,
                   decompose, determinant, direct_sum, enumerate_disks, fox_milnor_square_test,
                   hfk_ranks, is_convex, is_thin, lspace_obstructions, make_box, oracle_alexander,
                   oracle_determinant, oracle_hfk, tau, upsilon)
from cfk11.complex import graded_homology, staircase_shape
from cfk11.domains import basepoint_multiplicities, connecting_domain, maslov_index, periodic_domain
from cached import GRID, family_complex, family_simplified, family_upsilon, knot_complex
from reference_tables import DISKS_K1_34, GRADINGS_K1_34, DISKS_K2_37, GRADINGS_K2_37


def _q(variant, k):
    return 3 * k + (1 if variant == "3k+1" else 2)


def test_criterion_1_reference_disks_and_gradings(record):
    t0 = time.time()
    c1 = family_complex("3k+1", 1, 1)
    c2 = family_complex("3k+1", 2, 2)

    def by_grading(c):
        out = {}
        for l, a in zip(c.labels, c.A):
            out.setdefault(a, set()).add(l)
        return out

    checks = {
        "disks_K1_34": c1.arrow_set() == {(f, t, *m) for f, t, m in DISKS_K1_34} and len(c1.arrows) == 26,
        "gradings_K1_34": by_grading(c1) == {a: set(ls) for a, ls in GRADINGS_K1_34.items()},
        "disks_K2_37": c2.arrow_set() == {(f, t, *m) for f, t, m in DISKS_K2_37},
        "gradings_K2_37": by_grading(c2) == {a: set(ls) for a, ls in GRADINGS_K2_37.items()},
    }
    record(1, all(checks.values()), f"{checks} ({len(c1.arrows)} arrows for K_1^(3,4)) "
                                    f"[{time.time() - t0:.1f}s]")
    assert all(checks.values()), checks


def test_criterion_2_oracle_grid(record):
    t0 = time.time()
    bad = []
    for v, k, n in GRID:
        spec = FamilySpec(v, k, n)
        c = family_complex(v, k, n)
        if hfk_ranks(c) != oracle_hfk(spec):
            bad.append((v, k, n, "hfk"))
        if alexander_polynomial(c) != oracle_alexander(spec):
            bad.append((v, k, n, "alexander"))
        if determinant(c) != oracle_determinant(spec):
            bad.append((v, k, n, "determinant"))
    record(2, not bad, f"{len(GRID)} members, mismatches {bad} [{time.time() - t0:.1f}s]")
    assert not bad


def test_criterion_3_structure(record):
    t0 = time.time()
    bad = []
    for v, k, n in GRID:
        comps = decompose(family_simplified(v, k, n))
        stairs = [c for c in comps if c.kind == "staircase"]
        boxes = [c for c in comps if c.kind == "box"]
        others = [c for c in comps if c.kind == "other"]
        length = 4 * k + (1 if v == "3k+1" else 3)
        size = FamilySpec(v, k, n).generator_count
        ok = (len(stairs) == 1 and stairs[0].size == length and not others
              and len(boxes) == n * (2 * k + 1) == (size - length) // 4)
        if ok:
            base = decompose(family_simplified(v, k, 0))[0]
            ok = staircase_shape(stairs[0].complex) == staircase_shape(base.complex)
        if not ok:
            bad.append((v, k, n))
    record(3, not bad, f"one staircase + n(2k+1) boxes, staircase = n=0 staircase; failures {bad} "
                       f"[{time.time() - t0:.1f}s]")
    assert not bad


def test_criterion_4_upsilon(record):
    t0 = time.time()
    bad = []
    for v, k, n in GRID:
        f = family_upsilon(v, k, n)
        base = family_upsilon(v, k, 0)
        mids = [(a + b) / 2 for (a, _), (b, _) in zip(f.points, f.points[1:])]
        sym = all(f(2 - t) == f(t) for t in [p for p, _ in f.points] + mids)
        ok = (f.points == base.points and is_convex(f) and f.slopes()[0] == -(_q(v, k) - 1)
              and tau(f) == _q(v, k) - 1 and sym)
        if not ok:
            bad.append((v, k, n))
    record(4, not bad, f"identical to n=0, convex, slope -(q-1), symmetric; failures {bad} "
                       f"[{time.time() - t0:.1f}s]")
    assert not bad


def test_criterion_5_negative_verdicts(record):
    t0 = time.time()
    bad = []
    for v, k, n in GRID:
        if n == 0:
            continue
        c = family_complex(v, k, n)
        if is_thin(c) or not lspace_obstructions(c).obstructed:
            bad.append((v, k, n))
    record(5, not bad, f"not thin and not L-space for n >= 1; failures {bad} [{time.time() - t0:.1f}s]")
    assert not bad


def test_criterion_6_fox_milnor(record):
    d1 = determinant(family_complex("3k+1", 1, 1))
    d2 = determinant(family_complex("3k+1", 1, 2))
    verdict = fox_milnor_square_test(d1, d2)
    ok = (d1, d2) == (7, 11) and verdict == "obstructed"
    record(6, ok, f"dets ({d1}, {d2}) -> {verdict}")
    assert ok


def test_criterion_7_properties(record):
    t0 = time.time()
    rng = random.Random(20240607)
    results = {}
    members = [m for m in GRID if m[1] <= 2]

    ok = True
    for m in members:
        ok &= d_squared_check(family_complex(*m)).ok
    results["d2"] = ok

    ok = True
    for m in members:
        c = family_complex(*m)
        g = c.gradings()
        ok &= all(g[a.source][0] - g[a.target][0] == a.n_z - a.n_w for a in c.arrows)
    results["grading_rule"] = ok

    results["A_symmetry"] = all(sorted(family_complex(*m).A) == sorted(-a for a in family_complex(*m).A)
                                for m in members)

    ok = True
    for m in members:
        c = family_complex(*m)
        hat = [a for a in c.arrows if a.n_w == 0]
        ok &= graded_homology(c.labels, dict(zip(c.labels, c.M)), hat) == {0: 1}
    results["s3_rank_one"] = ok

    ok = True
    for m in (("3k+1", 1, 1), ("3k+2", 2, 1)):
        cc = build_arrangement(build_family(FamilySpec(*m)))
        P = periodic_domain(cc)
        for x in range(cc.n):
            D = connecting_domain(x, 0, cc)
            for E in (D + P, D + P + P, D + (-P)):
                nz, nw = basepoint_multiplicities(D)
                nz2, nw2 = basepoint_multiplicities(E)
                ok &= nz2 - nw2 == nz - nw and maslov_index(E) - 2 * nw2 == maslov_index(D) - 2 * nw
    results["periodic_domain"] = ok

    ok = True
    for _ in range(20):
        m = rng.choice(members)
        s = direct_sum(family_complex(*m), make_box(rng.randint(-10, 10), rng.randint(-10, 10)))
        f = upsilon(s)
        ok &= f == family_upsilon(*m) and tau(f) == tau(family_upsilon(*m))
    results["box_sum_20"] = ok

    ok = True
    for m in (("3k+1", 1, 1), ("3k+2", 1, 2), ("3k+1", 2, 1)):
        cc = build_arrangement(build_family(FamilySpec(*m)))
        arrows, meta = enumerate_disks(cc)
        W = meta["effective_window"]
        ok &= sorted(enumerate_disks(cc, window=W)[0]) == sorted(arrows) == \
            sorted(enumerate_disks(cc, window=2 * W)[0])
    results["window_W_2W"] = ok

    passed = all(results.values())
    record(7, passed, f"{results} [{time.time() - t0:.1f}s]")
    assert passed, results


def test_criterion_8_corpus(record):
    u, t, e = knot_complex("unknot"), knot_complex("trefoil"), knot_complex("figure_eight")
    checks = {
        "unknot": alexander_polynomial(u).coefficients == {0: 1} and tau(u) == 0 and upsilon(u).is_zero(),
        "trefoil": determinant(t) == 3 and abs(tau(t)) == 1 and upsilon(t)(1) == -1,
        "figure_eight": is_thin(e) and tau(e) == 0 and upsilon(e).is_zero(),
    }
    record(8, all(checks.values()), str(checks))
    assert all(checks.values())


if __name__ == "__main__":
    import sys
    sys.exit(__import__("pytest").main([__file__, "-q"]))
