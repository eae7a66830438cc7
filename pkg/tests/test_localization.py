import random
from fractions import Fraction

import pytest

from rxval.base_field import ONE_ELEM, ZERO_ELEM, monomial
from rxval.incoherence import DEFAULT_CONFIG, IncoherenceConfig, build_witness_series
from rxval.localization import (
    ONE_SERIES,
    LocalFraction,
    PurityError,
    ValueBounds,
    as_fraction,
    factor_unit,
    fractions_equal,
    invert,
    is_unit_denominator,
    move_into_T,
    mul_fraction,
    pure_divide,
    purity_block,
    unitizer,
    unitizer_evidence,
    val_fraction,
)
from rxval.power_series import (
    CertificateError,
    CertifiedSeries,
    ConstantTail,
    SeriesPoly,
    SequenceTail,
    ZeroTail,
    certified,
    geometric_grid,
    mul_certified,
    v_zero,
)
from rxval.suites import purity_triple
from rxval.value_group import INF, SQRT2, ZERO, GroupScalar, NotInGroupError, ValueGroup

S = GroupScalar
Q, ZZ = ValueGroup.RATIONALS, ValueGroup.Z_PLUS_Z_SQRT2
h = Fraction(1, 2)
ALPHA = SQRT2 - 1


def t(e, c=1):
    return monomial(S(e), c)


def test_val_fraction_examples():
    w = build_witness_series(DEFAULT_CONFIG)
    assert val_fraction(as_fraction(w)) == ALPHA
    u = certified([ONE_ELEM, t(1)], ConstantTail(ZERO))
    assert val_fraction(LocalFraction(certified([t(1)]), t(h), u)) == S(h)
    bounds = val_fraction(LocalFraction(SeriesPoly((t(1), t(2))), t(h), ONE_SERIES))
    assert bounds == ValueBounds(ZERO - S(h), S(h))


def test_equal_fractions_equal_values():
    f = build_witness_series(DEFAULT_CONFIG)
    w = certified([ONE_ELEM, ONE_ELEM], ConstantTail(ZERO))
    x = LocalFraction(f, t(h), ONE_SERIES)
    y = LocalFraction(mul_certified(f, w), t(h), w)
    assert fractions_equal(x, y, 16)
    assert val_fraction(x) == val_fraction(y)
    assert not fractions_equal(x, LocalFraction(f, t(1), ONE_SERIES), 16)


def test_fraction_validation():
    with pytest.raises(ValueError):
        LocalFraction(ONE_SERIES, t(-1), ONE_SERIES)
    with pytest.raises(ValueError):
        LocalFraction(ONE_SERIES, ZERO_ELEM, ONE_SERIES)
    with pytest.raises(ValueError):
        LocalFraction(ONE_SERIES, ONE_ELEM, certified([t(h)]))


def test_is_unit_denominator():
    assert is_unit_denominator(ONE_SERIES)
    assert not is_unit_denominator(certified([t(h)]))
    u = CertifiedSeries(SeriesPoly((ONE_ELEM, t(h))), SequenceTail(ALPHA, Q))
    assert is_unit_denominator(u)


def test_factor_unit_examples():
    f = certified([t(h), t(h)])
    r, u = factor_unit(f, Q)
    assert r == t(h) and u.coeffs(4) == (ONE_ELEM, ONE_ELEM, ZERO_ELEM, ZERO_ELEM)
    f3 = certified([t(2), t(3), t(Fraction(3, 2)), t(1), t(2)])
    r, u = factor_unit(f3, Q)
    assert r == t(1) and v_zero(u) == ZERO and u.coeff(3) == ONE_ELEM
    r, u = factor_unit(certified([t(3, 7)]), Q)
    assert r == t(3) and u.coeffs(2) == (monomial(ZERO, 7), ZERO_ELEM)
    with pytest.raises(NotInGroupError):
        factor_unit(build_witness_series(DEFAULT_CONFIG), Q)
    with pytest.raises(ValueError):
        factor_unit(certified([ZERO_ELEM]), Q)


def test_factor_unit_unattained_infimum():
    # v_0 = sqrt2 - 1 lies in Z + Z sqrt2 but no coefficient reaches it
    r, u = factor_unit(CertifiedSeries(SeriesPoly((t(1),)), ConstantTail(ALPHA)), ZZ)
    assert r == monomial(ALPHA) and v_zero(u) == ZERO
    with pytest.raises(NotInGroupError):
        factor_unit(build_witness_series(IncoherenceConfig(ZZ, S(h), t(1))), ZZ)


def test_unitizer_examples():
    f = build_witness_series(DEFAULT_CONFIG)
    g = unitizer(f, Q, S(1))
    assert v_zero(g) == S(2, -1)
    fg = mul_certified(f, g)
    assert v_zero(fg) == S(1)
    ev = unitizer_evidence(f, g, S(1), geometric_grid(S(1), 10), 64)
    assert ev.bounded_below and ev.approaching and ev.final_gap < S(Fraction(1, 16))
    # default beta is deterministic and lies in (alpha, alpha + 1)
    g1, g2 = unitizer(f, Q), unitizer(f, Q)
    assert g1.coeffs(10) == g2.coeffs(10)
    assert ALPHA < v_zero(f) + v_zero(g1) < ALPHA + 1


def test_unitizer_rejections():
    f = build_witness_series(DEFAULT_CONFIG)
    with pytest.raises(NotInGroupError):
        unitizer(f, Q, SQRT2)
    with pytest.raises(ValueError):
        unitizer(f, Q, S(Fraction(1, 3)))
    with pytest.raises(ValueError):
        unitizer(certified([t(h)]), Q)
    half = build_witness_series(IncoherenceConfig(ZZ, S(h), t(1)))
    g = unitizer(half, ZZ, S(2, -1))
    assert v_zero(g) == S(2, -1) - S(h)


def test_invert_and_trichotomy():
    f = build_witness_series(DEFAULT_CONFIG)
    x = LocalFraction(f, t(2), ONE_SERIES)
    xi = invert(x, Q)
    assert val_fraction(x) + val_fraction(xi) == ZERO
    assert val_fraction(xi) >= ZERO
    one = mul_fraction(x, xi)
    assert fractions_equal(one, as_fraction(ONE_SERIES), 20)
    y = invert(LocalFraction(certified([t(h), ONE_ELEM]), ONE_ELEM, ONE_SERIES), Q)
    assert val_fraction(y) == ZERO
    with pytest.raises(ZeroDivisionError):
        invert(as_fraction(certified([ZERO_ELEM])), Q)
    with pytest.raises(CertificateError):
        invert(as_fraction(SeriesPoly((ONE_ELEM,))), Q)


def test_move_into_T():
    f = certified([t(3), t(2)], ConstantTail(S(Fraction(5, 2))))
    x = LocalFraction(f, t(1), ONE_SERIES)
    y = move_into_T(x)
    assert y.den_r == ONE_ELEM and fractions_equal(x, y, 10) and y.in_T_form
    with pytest.raises(ValueError):
        move_into_T(LocalFraction(f, t(3), ONE_SERIES))


def test_pure_divide_examples():
    a = t(h)
    f = SeriesPoly((t(h), t(1)))
    g = SeriesPoly((ONE_ELEM, t(h)))
    out = pure_divide(a, f, g, ONE_SERIES)
    assert out.coeffs == (ONE_ELEM, t(h))
    assert pure_divide(ONE_ELEM, f, f, ONE_SERIES).coeffs == f.coeffs


def test_pure_divide_rejections():
    f = SeriesPoly((t(h), t(1)))
    # val(a) > v_0(f): no honest witness can exist, a fabricated one is caught
    with pytest.raises(PurityError):
        pure_divide(t(1), f, f, ONE_SERIES)
    with pytest.raises(PurityError):
        pure_divide(t(1), f, SeriesPoly((ONE_ELEM, ONE_ELEM)), ONE_SERIES)
    with pytest.raises(PurityError):
        pure_divide(ZERO_ELEM, f, f, ONE_SERIES)
    with pytest.raises(PurityError):
        pure_divide(ONE_ELEM, f, f, certified([t(h)]))


def test_purity_blocks():
    rng = random.Random(3)
    for _ in range(30):
        a, f, g, u, hh = purity_triple(rng, 12)
        blk = purity_block(a, f, g, u, 12)
        assert blk.result == "PASS", blk.format()
        text = blk.format()
        assert text.startswith("[purity]") and "identity: a*g = f*u" in text
    bad = purity_block(t(1), SeriesPoly((t(h),)), SeriesPoly((ONE_ELEM,)), ONE_SERIES, 1)
    assert bad.result.startswith("REJECTED")


def test_direct_product_purity_componentwise():
    # an indexed family of witnesses is pure iff every component is
    rng = random.Random(9)
    family = [purity_triple(rng, 8) for _ in range(6)]
    results = [pure_divide(a, f, g, u, 8) for a, f, g, u, _ in family]
    assert all(r.same_prefix(hh, 8) for r, (*_, hh) in zip(results, family))
