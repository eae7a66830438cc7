"""The localizations T = R[[X]]_U and K = R[[X]]_V.

U is the set of series with v_0 = 0 and V = {r*u : r in R \\ 0, u in U}.
Elements of K are kept as unreduced fractions num / (den_r * den_u).  Their
value is v_0(num) - v(den_r).  Equality is checked by cross-multiplying at a
truncation order.
"""
from __future__ import annotations

from dataclasses import dataclass

from rxval.base_field import ONE_ELEM, FieldElem, divide_in_R, format_field, monomial
from rxval.power_series import (
    CertificateError,
    CertifiedSeries,
    SeriesPoly,
    SequenceTail,
    ZeroTail,
    Series,
    known_min,
    mul,
    mul_certified,
    scale,
    scale_certified,
    v_lambda,
    v_zero,
)
from rxval.value_group import (
    ZERO,
    ExtScalar,
    GroupScalar,
    Infinity,
    NotInGroupError,
    ValueGroup,
    decreasing_sequence,
    find_in_interval,
    format_ext,
    format_scalar,
    in_group,
)

__all__ = [
    "LocalFraction",
    "ValueBounds",
    "PurityError",
    "WitnessBlock",
    "as_fraction",
    "val_fraction",
    "fractions_equal",
    "mul_fraction",
    "is_unit_denominator",
    "factor_unit",
    "unitizer",
    "unitizer_evidence",
    "invert",
    "move_into_T",
    "pure_divide",
]

ONE_SERIES = CertifiedSeries(SeriesPoly((ONE_ELEM,)), ZeroTail())


class PurityError(ValueError):
    """A purity witness is inconsistent."""


@dataclass(frozen=True)
class ValueBounds:
    """v_0 of a bare truncation is only known to lie in [lower, upper]."""

    lower: ExtScalar
    upper: ExtScalar


@dataclass(frozen=True, eq=False)
class LocalFraction:
    num: Series
    den_r: FieldElem
    den_u: CertifiedSeries

    def __post_init__(self) -> None:
        if self.den_r.is_zero() or self.den_r.val < ZERO:
            raise ValueError("den_r must be a nonzero element of R")
        if v_zero(self.den_u) != ZERO:
            raise ValueError("den_u must lie in U (v_0 = 0)")

    @property
    def in_T_form(self) -> bool:
        """The denominator already lies in U (den_r is a unit of R)."""
        return self.den_r.val == ZERO

    def __str__(self) -> str:
        return f"({self.num}) / ([{format_field(self.den_r)}] * ({self.den_u}))"


def as_fraction(f: Series) -> LocalFraction:
    """The image of f under R[[X]] -> K."""
    return LocalFraction(f, ONE_ELEM, ONE_SERIES)


def val_fraction(x: LocalFraction) -> ExtScalar | ValueBounds:
    """v_0(num) - v(den_r) - v_0(den_u), the last term being 0."""
    if isinstance(x.num, CertifiedSeries):
        return v_zero(x.num) - x.den_r.val
    d = x.den_r.val
    return ValueBounds(x.num.lower_bound() - d, known_min(x.num) - d)


def _trunc(f: Series, order: int) -> SeriesPoly:
    return f.truncate(order)


def fractions_equal(x: LocalFraction, y: LocalFraction, order: int) -> bool:
    """x.num * y.den == y.num * x.den coefficientwise below ``order``."""
    lhs = scale(mul(_trunc(x.num, order), _trunc(y.den_u, order)), y.den_r)
    rhs = scale(mul(_trunc(y.num, order), _trunc(x.den_u, order)), x.den_r)
    return lhs.same_prefix(rhs, order)


def mul_fraction(x: LocalFraction, y: LocalFraction) -> LocalFraction:
    if isinstance(x.num, CertifiedSeries) and isinstance(y.num, CertifiedSeries):
        num: Series = mul_certified(x.num, y.num)
    else:
        n = min(x.num.prefix.order if isinstance(x.num, CertifiedSeries) else x.num.order,
                y.num.prefix.order if isinstance(y.num, CertifiedSeries) else y.num.order)
        num = mul(_trunc(x.num, n), _trunc(y.num, n))
    return LocalFraction(num, x.den_r * y.den_r, mul_certified(x.den_u, y.den_u))


def is_unit_denominator(u: CertifiedSeries) -> bool:
    return v_zero(u) == ZERO


def factor_unit(f: CertifiedSeries, group: ValueGroup) -> tuple[FieldElem, CertifiedSeries]:
    """f = r*u with v(r) = v_0(f) and v_0(u) = 0, possible when v_0(f) is in the group.

    u is f with every coefficient divided by r = t^(v_0 f).  The infimum need
    not be attained.
    """
    alpha = v_zero(f)
    if isinstance(alpha, Infinity):
        raise ValueError("zero series has no unit factorization")
    if not in_group(alpha, group):
        raise NotInGroupError(f"v_0(f) = {format_scalar(alpha)} is outside the value group; use unitizer")
    r = monomial(alpha)
    prefix = tuple(divide_in_R(r, c) for c in f.prefix.coeffs)
    u = scale_certified(f, r.inv())
    u = CertifiedSeries(SeriesPoly(prefix), u.tail)
    if v_zero(u) != ZERO:
        raise AssertionError("unit part has v_0 != 0")
    return r, u


def unitizer(
    f: CertifiedSeries,
    group: ValueGroup,
    beta: GroupScalar | None = None,
    prefix_len: int = 8,
) -> CertifiedSeries:
    """g with v_0(g) = beta - v_0(f), so that v_0(fg) = beta lies in the group.

    Used when v_0(f) is outside the group; beta defaults to the least-height
    group element in (v_0 f, v_0 f + 1).
    """
    alpha = v_zero(f)
    if isinstance(alpha, Infinity):
        raise ValueError("zero series")
    if in_group(alpha, group):
        raise ValueError(f"v_0(f) = {format_scalar(alpha)} lies in the group; use factor_unit")
    if beta is None:
        beta = find_in_interval(alpha, alpha + 1, group)
    if not in_group(beta, group):
        raise NotInGroupError(f"beta = {format_scalar(beta)} is not in the value group")
    if not beta > alpha:
        raise ValueError("beta must exceed v_0(f)")
    target = beta - alpha
    exps = decreasing_sequence(target, group, prefix_len)
    return CertifiedSeries(SeriesPoly(tuple(monomial(e) for e in exps)), SequenceTail(target, group))


@dataclass(frozen=True)
class UnitizerEvidence:
    beta: GroupScalar
    lambdas: tuple[GroupScalar, ...]
    values: tuple[ExtScalar, ...]
    exact: tuple[bool, ...]

    @property
    def bounded_below(self) -> bool:
        return all(v >= self.beta for v, e in zip(self.values, self.exact) if e)

    @property
    def approaching(self) -> bool:
        """Exact values are nonincreasing as lam shrinks."""
        vals = [v for v, e in zip(self.values, self.exact) if e]
        return all(a >= b for a, b in zip(vals, vals[1:]))

    @property
    def final_gap(self) -> ExtScalar:
        vals = [v for v, e in zip(self.values, self.exact) if e]
        return vals[-1] - self.beta if vals else self.values[-1]


def unitizer_evidence(
    f: CertifiedSeries, g: CertifiedSeries, beta: GroupScalar, lambdas, order: int
) -> UnitizerEvidence:
    """chi of the truncated product f*g on a lam-grid; should sit above beta and descend to it."""
    prod = mul(f.truncate(order), g.truncate(order))
    res = [v_lambda(prod, lam) for lam in lambdas]
    return UnitizerEvidence(beta, tuple(lambdas), tuple(r.value for r in res), tuple(r.exact for r in res))


def invert(x: LocalFraction, group: ValueGroup, beta: GroupScalar | None = None) -> LocalFraction:
    """x^{-1} in K for nonzero x with certified numerator.

    num = r*u when v_0(num) is in the group; otherwise num*g = r*u for the
    unitizer g and x^{-1} = den * g / (r*u).
    """
    if not isinstance(x.num, CertifiedSeries):
        raise CertificateError("inversion needs a certified numerator")
    alpha = v_zero(x.num)
    if isinstance(alpha, Infinity):
        raise ZeroDivisionError("zero element of K")
    den = scale_certified(x.den_u, x.den_r)
    if in_group(alpha, group):
        r, u = factor_unit(x.num, group)
        return LocalFraction(den, r, u)
    g = unitizer(x.num, group, beta)
    r, u = factor_unit(mul_certified(x.num, g), group)
    return LocalFraction(mul_certified(den, g), r, u)


def move_into_T(x: LocalFraction) -> LocalFraction:
    """Rewrite x with value >= 0 as g / u (den_r = 1): divide num by den_r."""
    v = val_fraction(x)
    if isinstance(v, ValueBounds):
        raise CertificateError("needs a certified numerator")
    if v < ZERO:
        raise ValueError(f"value {format_ext(v)} < 0: x is not in T")
    if not isinstance(x.num, CertifiedSeries):
        raise CertificateError("needs a certified numerator")
    prefix = tuple(divide_in_R(x.den_r, c) for c in x.num.prefix.coeffs)
    tail = scale_certified(x.num, x.den_r.inv()).tail
    return LocalFraction(CertifiedSeries(SeriesPoly(prefix), tail), ONE_ELEM, x.den_u)


# ---------------------------------------------------------------------------
# purity of R[[X]] in T
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessBlock:
    title: str
    inputs: tuple[tuple[str, str], ...]
    identity: str
    result: str

    def format(self) -> str:
        lines = [f"[{self.title}]"]
        lines += [f"{k}: {v}" for k, v in self.inputs]
        lines.append(f"identity: {self.identity}")
        lines.append(f"result: {self.result}")
        return "\n".join(lines)


def pure_divide(a: FieldElem, f: Series, g: Series, u: CertifiedSeries, order: int | None = None) -> SeriesPoly:
    """Given a*g = f*u with u in U (f exhibited in aT), return h with f = a*h.

    Every coefficient of f must then be divisible by a in R; an inconsistent
    witness raises :class:`PurityError`.
    """
    if a.is_zero() or a.val < ZERO:
        raise PurityError("a must be a nonzero element of R")
    if not is_unit_denominator(u):
        raise PurityError("u is not in U")
    fs = f if isinstance(f, SeriesPoly) else f.truncate(order or f.start)
    gs = g if isinstance(g, SeriesPoly) else g.truncate(order or g.start)
    n = min(fs.order, gs.order) if order is None else order
    if fs.order < n or gs.order < n:
        raise ValueError(f"truncation order {n} exceeds the known coefficients")
    fs, gs = fs.truncate(n), gs.truncate(n)
    us = u.truncate(n)
    lhs = scale(gs, a)
    rhs = mul(fs, us)
    for k in range(n):
        if lhs.coeffs[k] != rhs.coeffs[k]:
            raise PurityError(f"witness identity a*g = f*u fails at X^{k}")
    for k, c in enumerate(fs.coeffs):
        if c.val < a.val:
            raise PurityError(
                f"coefficient X^{k} has val {format_ext(c.val)} < v(a) = {format_ext(a.val)}; witness inconsistent"
            )
    floor = fs.tail_floor
    if not isinstance(floor, Infinity):
        floor = floor - a.val
        if floor < ZERO:
            floor = ZERO
    return SeriesPoly(tuple(divide_in_R(a, c) for c in fs.coeffs), floor)


def purity_block(a: FieldElem, f: Series, g: Series, u: CertifiedSeries, order: int) -> WitnessBlock:
    inputs = (("a", format_field(a)), ("order", str(order)), ("f", str(f)), ("g", str(g)), ("u", str(u)))
    try:
        h = pure_divide(a, f, g, u, order)
    except PurityError as exc:
        return WitnessBlock("purity", inputs, "a*g = f*u  =>  f = a*h", f"REJECTED {exc}")
    fs = f if isinstance(f, SeriesPoly) else f.truncate(order)
    ok = scale(h, a).same_prefix(fs.truncate(order), order)
    return WitnessBlock("purity", inputs + (("h", str(h)),), "a*g = f*u  =>  f = a*h", "PASS" if ok else "FAIL")
