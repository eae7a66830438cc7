import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rxval.base_field import ONE_ELEM, ZERO_ELEM, monomial
from rxval.incoherence import DEFAULT_CONFIG, build_witness_series
from rxval.power_series import (
    CertificateError,
    CertifiedSeries,
    ConstantTail,
    SeriesPoly,
    SequenceTail,
    ZeroTail,
    add,
    brute_force_v_lambda,
    certified,
    check_certificate,
    check_filtration_axioms,
    chi_csv,
    chi_table,
    continuity_lambda,
    deserialize_series,
    geometric_grid,
    mul,
    mul_certified,
    neg,
    newton_polygon,
    serialize_series,
    v_lambda,
    v_zero,
)
from rxval.suites import rand_lambda, rand_poly, positive_sequence_series
from rxval.value_group import INF, SQRT2, ZERO, GroupScalar, ValueGroup

S = GroupScalar
Q = ValueGroup.RATIONALS
h, q = Fraction(1, 2), Fraction(1, 4)
ALPHA = SQRT2 - 1


def t(e, c=1):
    return monomial(S(e), c)


X = ONE_ELEM  # readability in coefficient lists

# f = t + t^(1/2) X + X^2
F3 = SeriesPoly((t(1), t(h), ONE_ELEM))


def test_vlambda_window_example():
    r = v_lambda(F3, S(q))
    assert (r.value, r.argmin, r.exact) == (S(h), (2,), True)


def test_vlambda_constant_and_monomial():
    one = SeriesPoly((ONE_ELEM,))
    for lam in (S(q), S(3), SQRT2):
        r = v_lambda(one, lam)
        assert (r.value, r.argmin, r.exact) == (ZERO, (0,), True)
    xj = certified([ZERO_ELEM] * 3 + [ONE_ELEM])
    r = v_lambda(xj, S(Fraction(2, 3)))
    assert (r.value, r.argmin, r.exact) == (S(2), (3,), True)


def test_vlambda_errors_and_zero():
    with pytest.raises(ValueError):
        v_lambda(F3, ZERO)
    with pytest.raises(ValueError):
        v_lambda(F3, S(-1))
    r = v_lambda(SeriesPoly((ZERO_ELEM, ZERO_ELEM)), S(1))
    assert r.value is INF and not r.exact


def test_vlambda_inexact_when_tail_could_win():
    # one known coefficient of val 5, tail unknown from X^1 on at lam = 1
    r = v_lambda(SeriesPoly((t(5),)), S(1))
    assert not r.exact
    r = v_lambda(SeriesPoly((t(5),), INF), S(1))
    assert r.exact and r.value == S(5)


def test_window_matches_brute_force():
    rng = random.Random(1)
    exact_seen = 0
    for _ in range(300):
        f = rand_poly(rng, Q if rng.random() < 0.5 else ValueGroup.Z_PLUS_Z_SQRT2)
        for _ in range(5):
            lam = rand_lambda(rng)
            r = v_lambda(f, lam)
            if r.exact:
                exact_seen += 1
                assert (r.value, r.argmin) == brute_force_v_lambda(f, lam)
    assert exact_seen > 500


def test_v_zero_examples():
    w = build_witness_series(DEFAULT_CONFIG)
    assert v_zero(w) == ALPHA
    assert v_zero(certified([t(h) + t(2)])) == S(h)
    f = CertifiedSeries(SeriesPoly((t(1), t(q))), ConstantTail(S(h)))
    assert v_zero(f) == S(q)
    with pytest.raises(CertificateError):
        v_zero(F3)


def test_ring_ops_examples():
    p = mul(SeriesPoly((ONE_ELEM, ONE_ELEM), INF), SeriesPoly((ONE_ELEM, -ONE_ELEM), INF))
    assert p.coeffs == (ONE_ELEM, ZERO_ELEM, -ONE_ELEM)
    z = add(F3, neg(F3))
    assert all(c.is_zero() for c in z.coeffs)
    p = mul(SeriesPoly((t(h),)), SeriesPoly((t(h),)))
    assert p.coeffs[0] == t(1)


def test_truncation_floor_propagates():
    f = SeriesPoly((t(1), t(2)), S(3))
    g = SeriesPoly((t(h), t(1), t(1)), ZERO)
    p = mul(f, g)
    # min over all coefficient bounds of f plus that of g
    assert p.order == 2 and p.tail_floor == S(1)


def test_newton_polygon_examples():
    poly = newton_polygon(SeriesPoly(F3.coeffs, INF))
    assert poly(S(q)) == S(h)
    assert poly(S(Fraction(1, 8))) == S(q)
    assert poly(S(1)) == S(1)
    assert [p[0] for p in poly.pieces] == [ZERO, S(h)]
    mono = newton_polygon(SeriesPoly((ZERO_ELEM, ZERO_ELEM, t(h)), INF))
    assert len(mono.pieces) == 1 and mono(S(3)) == S(Fraction(13, 2))


def test_newton_polygon_agrees_with_vlambda():
    rng = random.Random(2)
    for _ in range(40):
        f = rand_poly(rng, Q, max_order=24)
        if f.is_zero_known():
            continue
        poly = newton_polygon(f)
        for _ in range(100):
            lam = rand_lambda(rng)
            r = v_lambda(f, lam)
            assert poly(lam) == brute_force_v_lambda(f, lam)[0]
            if r.exact:
                assert poly.is_exact(lam) and poly(lam) == r.value
            if lam > poly.exact_from:
                assert poly.is_exact(lam)


def test_witness_chi_descends_to_alpha():
    w = build_witness_series(DEFAULT_CONFIG)
    grid = geometric_grid(S(1), 12)
    rows = chi_table(w, grid)
    vals = [r.value for r in rows]
    assert all(r.exact for r in rows)
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert all(v > ALPHA for v in vals)
    for eps in (S(q), S(Fraction(1, 16)), S(Fraction(1, 64))):
        lam, _ = continuity_lambda(w, eps)
        assert v_lambda(w, lam).value - ALPHA < eps


def test_filtration_reports():
    one = SeriesPoly((ONE_ELEM,), INF)
    rep = check_filtration_axioms(one, one, S(h))
    assert rep.status == "pass" and rep.v_prod.value == ZERO
    for i in range(4):
        for j in range(4):
            a = SeriesPoly((ZERO_ELEM,) * i + (ONE_ELEM,), INF)
            b = SeriesPoly((ZERO_ELEM,) * j + (ONE_ELEM,), INF)
            rep = check_filtration_axioms(a, b, S(Fraction(2, 5)))
            assert rep.status == "pass" and rep.v_prod.value == S(Fraction(2 * (i + j), 5))
    rep = check_filtration_axioms(SeriesPoly((t(9),)), SeriesPoly((t(9),)), S(1))
    assert rep.status == "inconclusive" and rep.ok


def test_filtration_sweep():
    rng = random.Random(4)
    lams = (S(Fraction(1, 3)), S(Fraction(2, 5)), SQRT2 / 2)
    decided = 0
    for _ in range(300):
        f, g = rand_poly(rng, Q, max_order=32), rand_poly(rng, Q, max_order=32)
        rep = check_filtration_axioms(f, g, rng.choice(lams))
        assert rep.ok
        decided += rep.status == "pass"
    assert decided > 100


def test_chi_csv_format():
    grid = geometric_grid(S(1), 3)
    one = certified([ONE_ELEM])
    text = chi_csv(grid, chi_table(one, grid))
    assert text.splitlines() == [
        "lambda,chi_value,exact_flag,argmin_indices",
        "1/2 + 0*sqrt2,0 + 0*sqrt2,true,0",
        "1/4 + 0*sqrt2,0 + 0*sqrt2,true,0",
        "1/8 + 0*sqrt2,0 + 0*sqrt2,true,0",
    ]


def test_serialize_round_trip():
    for f in (
        F3,
        SeriesPoly((t(h), ZERO_ELEM), INF),
        certified([t(q), t(SQRT2.b)], ConstantTail(S(h))),
        build_witness_series(DEFAULT_CONFIG),
    ):
        g = deserialize_series(serialize_series(f))
        if isinstance(f, SeriesPoly):
            assert g.coeffs == f.coeffs and g.tail_floor == f.tail_floor
        else:
            assert g.coeffs(20) == f.coeffs(20) and v_zero(g) == v_zero(f)
    prod = mul_certified(build_witness_series(DEFAULT_CONFIG), build_witness_series(DEFAULT_CONFIG))
    with pytest.raises(CertificateError):
        serialize_series(prod)


def test_certificates_hold():
    rng = random.Random(8)
    for _ in range(20):
        limit = S(Fraction(rng.randint(1, 9), 10)) + SQRT2 * Fraction(rng.randint(1, 3), 100)
        f = positive_sequence_series(rng, Q, limit, rng.randint(1, 6))
        assert check_certificate(f, 40)
        assert v_zero(f) == limit


def test_mul_certified_shapes_match_cauchy():
    w = build_witness_series(DEFAULT_CONFIG)
    poly = certified([ONE_ELEM, -t(h), t(2)])
    term = certified([ZERO_ELEM, t(SQRT2.b) * t(h)])
    for a, b in ((poly, poly), (term, w), (w, term), (w, w)):
        p = mul_certified(a, b)
        n = 24
        expect = mul(a.truncate(n), b.truncate(n))
        assert p.coeffs(n) == expect.coeffs[:n]
        assert check_certificate(p, 30)
        assert v_zero(p) == v_zero(a) + v_zero(b)
    with pytest.raises(CertificateError):
        mul_certified(certified([ONE_ELEM, -ONE_ELEM], ConstantTail(ZERO)), w)


def test_tail_rules_reentrant_under_threads():
    def fresh():
        return CertifiedSeries(SeriesPoly((t(1),)), SequenceTail(ALPHA, Q))

    ref = fresh().coeffs(60)
    shared = fresh()
    prod = mul_certified(fresh(), fresh())
    ref_prod = mul_certified(fresh(), fresh()).coeffs(40)
    order = list(range(60)) * 4
    random.Random(0).shuffle(order)
    with ThreadPoolExecutor(8) as pool:
        got = list(pool.map(shared.coeff, order))
        got_prod = list(pool.map(prod.coeff, [n % 40 for n in order]))
    assert got == [ref[n] for n in order]
    assert got_prod == [ref_prod[n % 40] for n in order]


def test_continuity_rejects_bad_eps():
    with pytest.raises(ValueError):
        continuity_lambda(build_witness_series(DEFAULT_CONFIG), ZERO)
    with pytest.raises(ValueError):
        continuity_lambda(certified([ZERO_ELEM]), S(1))


@given(st.fractions(Fraction(1, 30), 5, max_denominator=30), st.fractions(Fraction(1, 30), 5, max_denominator=30))
def test_chi_nondecreasing_in_lambda(a, b):
    lo, hi = sorted((S(a), S(b)))
    w = build_witness_series(DEFAULT_CONFIG)
    assert v_lambda(w, lo).value <= v_lambda(w, hi).value
