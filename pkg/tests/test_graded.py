import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rxval.base_field import ONE_ELEM, ZERO_ELEM, monomial
from rxval.graded import GradedPoly, GradedTerm, InexactError, graded_mul, graded_one, leading_form
from rxval.power_series import SeriesPoly, mul, v_lambda
from rxval.suites import _tie_pair, rand_lambda, rand_poly
from rxval.value_group import INF, SQRT2, ZERO, GroupScalar, ValueGroup

S = GroupScalar
h, q = Fraction(1, 2), Fraction(1, 4)


def t(e, c=1):
    return monomial(S(e), c)


def test_examples():
    f = SeriesPoly((t(1), t(h), ONE_ELEM))
    lf = leading_form(f, S(q))
    assert lf.degree == S(h) and lf.support == (2,) and lf.terms[0][1] == GradedTerm(ZERO, Fraction(1))
    one = leading_form(SeriesPoly((ONE_ELEM,)), S(3))
    assert one.degree == ZERO and one.support == (0,)
    tie = leading_form(SeriesPoly((t(h), ONE_ELEM), INF), S(h))
    assert tie.support == (0, 1) and tie.degree == S(h)


def test_identity_and_degree_additivity():
    lam = S(Fraction(2, 3))
    a = GradedPoly(S(Fraction(7, 3)), lam, ((1, GradedTerm(S(Fraction(5, 3)), Fraction(3))),))
    b = GradedPoly(S(Fraction(4, 3)), lam, ((2, GradedTerm(ZERO, Fraction(-1, 2))),))
    assert graded_mul(graded_one(lam), a) == a
    ab = graded_mul(a, b)
    assert ab.support == (3,) and ab.degree == a.degree + b.degree
    assert ab.terms[0][1] == GradedTerm(S(Fraction(5, 3)), Fraction(-3, 2))


def test_rejections():
    with pytest.raises(InexactError):
        leading_form(SeriesPoly((t(5),)), S(1))
    with pytest.raises(ValueError):
        leading_form(SeriesPoly((ZERO_ELEM,), INF), S(1))
    with pytest.raises(ValueError):
        graded_mul(graded_one(S(1)), graded_one(S(2)))
    with pytest.raises(ValueError):
        GradedPoly(S(1), S(1), ((0, GradedTerm(ZERO, Fraction(1))),))


def test_homomorphism_random_and_ties():
    rng = random.Random(12)
    checked = ties = 0
    for i in range(400):
        if i % 4 == 0:
            f, lam = _tie_pair(rng)
            g, _ = _tie_pair(rng)
        else:
            f, g, lam = rand_poly(rng, ValueGroup.RATIONALS, 16), rand_poly(rng, ValueGroup.RATIONALS, 16), rand_lambda(rng)
        try:
            a, b, ab = leading_form(f, lam), leading_form(g, lam), leading_form(mul(f, g), lam)
        except (InexactError, ValueError):
            continue
        ties += len(a.support) > 1
        assert graded_mul(a, b) == ab
        checked += 1
    assert checked > 150 and ties >= 50


@given(
    st.lists(st.tuples(st.integers(0, 6), st.fractions(-5, 5, max_denominator=4).filter(bool)), min_size=1, max_size=4, unique_by=lambda p: p[0]),
    st.fractions(Fraction(1, 8), 3, max_denominator=8),
)
def test_surjectivity_round_trip(spec, lam_f):
    # every homogeneous graded polynomial is the leading form of some series
    lam = S(lam_f)
    top = max(n for n, _ in spec)
    degree = lam * top + S(1)
    terms = tuple(sorted((n, GradedTerm(degree - lam * n, c)) for n, c in spec))
    target = GradedPoly(degree, lam, terms)
    coeffs = [ZERO_ELEM] * (top + 1)
    for n, term in terms:
        coeffs[n] = monomial(term.gamma, term.coeff) + monomial(term.gamma + S(5))
    f = SeriesPoly(tuple(coeffs), INF)
    assert leading_form(f, lam) == target
    assert v_lambda(f, lam).argmin == target.support


def test_irrational_slope():
    lam = SQRT2 - 1
    f = SeriesPoly((monomial(lam), ONE_ELEM), INF)
    g = SeriesPoly((ONE_ELEM, monomial(S(1))), INF)
    a, b = leading_form(f, lam), leading_form(g, lam)
    assert a.support == (0, 1)
    assert graded_mul(a, b) == leading_form(mul(f, g), lam)
