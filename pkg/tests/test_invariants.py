from fractions import Fraction as F

import pytest

from cfk11 import (Arrow, LaurentPolynomial, NonIntegerSlope, NormalizationError, PLFunction,
                   alexander_polynomial, determinant, fox_milnor_square_test, hfk_ranks, is_convex,
                   is_thin, lspace_obstructions, make_box, mirror, tau, upsilon)
from cfk11.complex import direct_sum, make_complex
from cfk11.families import staircase_steps
from cached import family_complex, family_upsilon, knot_complex
from reference_tables import staircase


def staircase_complex(steps):
    labels, A, M, arrows = staircase(steps)
    return make_complex(labels, A, M, [Arrow(f, t, *m) for f, t, m in arrows])


def staircase_upsilon_oracle(steps, t):
    """For a staircase the sinks are homologous cycles, so Upsilon is the max of M - tA over them."""
    labels, A, M, _ = staircase(steps)
    return max(M[i] - t * A[i] for i in range(0, len(labels), 2))


def test_laurent_polynomial_basics():
    p = LaurentPolynomial.from_list(-1, [1, -1, 1])
    assert str(p) == "t - 1 + t^-1"
    assert p(1) == 1 and p(-1) == -3
    assert p * p == LaurentPolynomial.from_list(-2, [1, -2, 3, -2, 1])
    assert p + (-p) == LaurentPolynomial()
    assert p.min_exponent == -1 and p.max_exponent == 1


def test_normalization_error():
    with pytest.raises(NormalizationError):
        alexander_polynomial({(0, 0): 2})
    assert alexander_polynomial({(1, 0): 1}) == LaurentPolynomial({0: 1})


def test_pl_function():
    f = PLFunction.from_points([(0, 0), (1, -1), (F(3, 2), F(-1, 2)), (2, 0)])
    assert f.points == ((0, 0), (1, -1), (2, 0))
    assert f(F(1, 2)) == F(-1, 2)
    assert is_convex(f) and f.is_symmetric()
    tent = PLFunction.from_points([(0, 0), (1, 1), (2, 0)])
    assert not is_convex(tent)
    assert is_convex(PLFunction.from_points([(0, 0), (2, 0)]))


def test_non_integer_slope():
    with pytest.raises(NonIntegerSlope):
        tau(PLFunction.from_points([(0, 0), (2, -1)]))


def test_fox_milnor():
    assert fox_milnor_square_test(7, 11) == "obstructed"
    assert fox_milnor_square_test(7, 7) == "inconclusive"
    assert fox_milnor_square_test(1, 9) == "inconclusive"


@pytest.mark.parametrize("p,q", [(2, 3), (2, 5), (3, 4), (3, 5), (3, 7), (3, 8)])
def test_upsilon_of_staircases_matches_oracle(p, q):
    steps = staircase_steps(p, q)
    f = upsilon(staircase_complex(steps))
    for t in [F(i, 12) for i in range(25)]:
        assert f(t) == staircase_upsilon_oracle(steps, t)
    assert tau(f) == (p - 1) * (q - 1) // 2


def test_test_corpus():
    u = knot_complex("unknot")
    assert alexander_polynomial(u) == LaurentPolynomial({0: 1})
    assert tau(u) == 0 and upsilon(u).is_zero()

    t = knot_complex("trefoil")
    assert determinant(t) == 3 and tau(t) == 1
    assert upsilon(t)(1) == staircase_upsilon_oracle([1, 1], 1) == -1

    e = knot_complex("figure_eight")
    assert is_thin(e) and tau(e) == 0 and upsilon(e).is_zero()
    assert determinant(e) == 5
    assert hfk_ranks(e) == {(-1, -1): 1, (0, 0): 3, (1, 1): 1}


def test_tau_values():
    assert tau(family_complex("3k+1", 1, 1)) == 3
    assert tau(family_complex("3k+1", 2, 1)) == 6
    assert tau(knot_complex("unknot")) == 0


def test_lspace_verdicts():
    v = lspace_obstructions(family_complex("3k+1", 1, 1))
    assert not v.coeffs_pm1 and not v.single_staircase and v.obstructed
    v = lspace_obstructions(family_complex("3k+1", 1, 0))
    assert v.coeffs_pm1 and v.single_staircase and not v.obstructed
    assert not lspace_obstructions(knot_complex("unknot")).obstructed
    assert lspace_obstructions(knot_complex("figure_eight")).obstructed


def test_thin_verdicts():
    assert not is_thin(family_complex("3k+1", 1, 1))
    assert is_thin(knot_complex("unknot"))


def test_mirror_negates_upsilon():
    for c in (family_complex("3k+1", 1, 1), family_complex("3k+2", 1, 2), knot_complex("trefoil")):
        f, g = upsilon(c), upsilon(mirror(c))
        for t in [F(i, 30) for i in range(61)]:
            assert g(t) == -f(t)


def test_box_sum_keeps_upsilon():
    c = family_complex("3k+2", 1, 1)
    s = direct_sum(c, make_box(2, 1))
    assert upsilon(s) == family_upsilon("3k+2", 1, 1)
    assert hfk_ranks(s) != hfk_ranks(c)


def test_hfk_total_rank_equals_generator_count():
    for k, n in ((1, 1), (2, 2)):
        c = family_complex("3k+1", k, n)
        assert sum(hfk_ranks(c).values()) == c.size
