import pytest

from cfk11 import (Arrow, AsymmetricGradings, FamilySpec, NotS3Homology, WindowTooSmall,
                   build_arrangement, build_family, d_squared_check, decompose, direct_sum,
                   enumerate_disks, make_box, maslov_gradings, mirror)
from cfk11.complex import (CFKComplex, _substitute, _symmetric_shift, cancel, classify,
                           make_complex, staircase_shape)
from cfk11.families import staircase_steps
from cached import family_complex, family_simplified, knot_complex
from reference_tables import DISKS_K1_34, GRADINGS_K1_34, staircase


def test_arrows_of_first_member():
    c = family_complex("3k+1", 1, 1)
    assert c.arrow_set() == {(f, t, *m) for f, t, m in DISKS_K1_34}


def test_gradings_of_first_member():
    c = family_complex("3k+1", 1, 1)
    got = {}
    for l, a in zip(c.labels, c.A):
        got.setdefault(a, set()).add(l)
    assert got == {a: set(ls) for a, ls in GRADINGS_K1_34.items()}


def test_maslov_normalisation():
    # the generator of HF-hat(S^3) is b1_1 + a1_2, both in Maslov grading zero
    c = family_complex("3k+1", 1, 1)
    assert c.grading("b1_1") == (3, 0) and c.grading("a1_2") == (3, 0)


def test_change_of_basis_by_hand():
    c = family_complex("3k+1", 1, 1)
    c = _substitute(c, "b1_1", "a1_2")
    c = _substitute(c, "f1", "e1")
    out = {(a.target, a.n_z, a.n_w) for a in c.arrows if a.source == "a1_1"}
    assert out == {("b1_1+a1_2", 0, 1), ("f1+e1", 2, 0)}
    assert not [a for a in c.arrows if a.source == "b1_1+a1_2"]
    assert d_squared_check(c).ok


def test_d_squared_detects_failure():
    c = make_complex(["x", "y", "z"], [0, 0, 0], [0, -1, -2],
                     [Arrow("x", "y", 0, 0), Arrow("y", "z", 0, 0)])
    v = d_squared_check(c)
    assert not v.ok and v.witness == ("x", "z", 0, 0)


def test_arrows_are_counted_mod_two():
    c = make_complex(["x", "y"], [0, 0], [0, -1], [Arrow("x", "y", 0, 0)] * 2)
    assert c.arrows == ()


def test_cancel_zigzag():
    # w -> x -> y <- v with x -> y plain: cancelling leaves nothing connecting w and v
    c = make_complex(["a", "x", "y", "b"], [1, 0, 0, -1], [1, 0, -1, -2],
                     [Arrow("a", "y", 1, 0), Arrow("x", "y", 0, 0), Arrow("x", "b", 1, 0)])
    r = cancel(c)
    assert r.labels == ("a", "b")
    assert r.arrow_set() == {("a", "b", 2, 0)}


def test_box():
    b = make_box(2, 1)
    assert d_squared_check(b).ok
    b.check_gradings()
    assert classify(b) == "box"
    assert classify(mirror(b)) == "box"


def test_direct_sum_relabels():
    b = make_box(0, 0)
    s = direct_sum(b, b)
    assert s.size == 8 and len(set(s.labels)) == 8 and len(s.arrows) == 8
    assert [c.kind for c in decompose(s)] == ["box", "box"]


def test_mirror_is_an_involution():
    c = family_complex("3k+2", 1, 1)
    assert mirror(mirror(c)) == c
    mirror(c).check_gradings()


def test_json_round_trip():
    c = family_complex("3k+2", 1, 1)
    assert CFKComplex.from_json(c.to_json()) == c


def test_dot_and_tikz_mention_every_generator():
    c = knot_complex("figure_eight")
    dot, tikz = c.to_dot(), c.to_tikz()
    assert dot.count("->") == len(c.arrows)
    assert tikz.count("\\draw") == len(c.arrows)
    for l in c.labels:
        assert f'"{l}"' in dot and f"${l}$" in tikz


def test_figure_eight_decomposes_into_box_and_dot():
    comps = decompose(family_simplified_or(knot_complex("figure_eight")))
    assert sorted(c.kind for c in comps) == ["box", "staircase"]
    assert [c.size for c in comps if c.kind == "staircase"] == [1]


def family_simplified_or(c):
    from cfk11 import simplify_basis
    return simplify_basis(c)


@pytest.mark.parametrize("variant,k", [("3k+1", 1), ("3k+1", 2), ("3k+2", 1), ("3k+2", 2)])
def test_torus_knot_staircase(variant, k):
    q = 3 * k + (1 if variant == "3k+1" else 2)
    labels, A, M, arrows = staircase(staircase_steps(3, q))
    oracle = make_complex(labels, A, M, [Arrow(f, t, *m) for f, t, m in arrows])
    (comp,) = decompose(family_simplified(variant, k, 0))
    assert staircase_shape(comp.complex) == staircase_shape(oracle)


def test_asymmetric_gradings():
    with pytest.raises(AsymmetricGradings):
        _symmetric_shift({"a": 0, "b": 1, "c": 3})
    assert _symmetric_shift({"a": 2, "b": 3, "c": 4}) == -3


def test_not_s3_homology():
    c = make_complex(["x", "y"], [0, 0], [0, 0], [])
    with pytest.raises(NotS3Homology):
        maslov_gradings(c)


def test_fixed_window_too_small():
    cc = build_arrangement(build_family(FamilySpec("3k+1", 1, 1)))
    with pytest.raises(WindowTooSmall):
        enumerate_disks(cc, window=0)


def test_fixed_window_records_effective_value():
    cc = build_arrangement(build_family(FamilySpec("3k+1", 1, 1)))
    arrows, meta = enumerate_disks(cc, window=40)
    assert meta["window"] == 40 and meta["effective_window"] == 40
    assert len(arrows) == 26
