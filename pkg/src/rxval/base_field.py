"""The valued field F: fractions of finite monomial sums over t^Gamma.

A :class:`MonomialSum` is a finite sum ``c1*t^(e1) + c2*t^(e2) + ...`` with
rational coefficients and exponents in Q(sqrt2).  A :class:`FieldElem` is a
fraction of two of them; the valuation is the least exponent of the numerator
minus the least exponent of the denominator.  Fractions are never reduced to a
canonical form.  Equality is decided by cross-multiplication.
"""
from __future__ import annotations

import functools
from fractions import Fraction
from typing import Iterable, Mapping

from rxval.value_group import (
    INF,
    ZERO,
    ExtScalar,
    GroupScalar,
    ValueGroup,
    format_scalar,
    in_group,
    parse_scalar,
)

__all__ = [
    "MonomialSum",
    "FieldElem",
    "NotDivisibleError",
    "monomial",
    "field_zero",
    "field_one",
    "val",
    "in_R",
    "divide_in_R",
    "check_exponents",
    "parse_field",
    "format_field",
]


class NotDivisibleError(ValueError):
    """The quotient would leave the valuation ring R."""


class MonomialSum:
    """Finite sum of rational multiples of t^gamma, terms sorted by exponent."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[GroupScalar, Fraction] | Iterable[tuple[GroupScalar, Fraction]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[GroupScalar, Fraction] = {}
        for e, c in items:
            acc[e] = acc.get(e, 0) + (c if type(c) is Fraction else Fraction(c))
        self.terms: tuple[tuple[GroupScalar, Fraction], ...] = tuple(
            sorted(((e, c) for e, c in acc.items() if c != 0), key=lambda ec: ec[0])
        )
        self._hash = None

    @classmethod
    def _sorted(cls, terms: tuple) -> "MonomialSum":
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    def is_zero(self) -> bool:
        return not self.terms

    def min_exponent(self) -> ExtScalar:
        return self.terms[0][0] if self.terms else INF

    def leading_coeff(self) -> Fraction:
        return self.terms[0][1] if self.terms else Fraction(0)

    def __add__(self, other: "MonomialSum") -> "MonomialSum":
        if not other.terms:
            return self
        if not self.terms:
            return other
        acc = dict(self.terms)
        for e, c in other.terms:
            s = acc.get(e, 0) + c
            if s:
                acc[e] = s
            else:
                acc.pop(e, None)
        return MonomialSum._sorted(tuple(sorted(acc.items(), key=lambda ec: ec[0])))

    def __neg__(self) -> "MonomialSum":
        return MonomialSum._sorted(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "MonomialSum") -> "MonomialSum":
        return self + (-other)

    def __mul__(self, other: "MonomialSum") -> "MonomialSum":
        if not self.terms or not other.terms:
            return _ZERO_SUM
        if len(other.terms) == 1:
            (e2, c2), = other.terms
            return MonomialSum._sorted(tuple((e + e2, c * c2) for e, c in self.terms))
        if len(self.terms) == 1:
            return other * self
        acc: dict[GroupScalar, Fraction] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                acc[e] = acc.get(e, 0) + c1 * c2
        return MonomialSum(acc)

    def shift(self, gamma: GroupScalar, scale: Fraction = Fraction(1)) -> "MonomialSum":
        """Multiply by ``scale * t^gamma``."""
        return MonomialSum._sorted(tuple((e + gamma, c * scale) for e, c in self.terms))

    def __eq__(self, other) -> bool:
        return isinstance(other, MonomialSum) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __repr__(self) -> str:
        return f"MonomialSum({format_sum(self)!r})"


_ZERO_SUM = MonomialSum()
_ONE_SUM = MonomialSum([(ZERO, Fraction(1))])


class FieldElem:
    """num/den with den != 0; den is kept with least exponent 0 and leading coefficient 1."""

    __slots__ = ("num", "den", "_val")

    def __init__(self, num: MonomialSum, den: MonomialSum = _ONE_SUM) -> None:
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = _ONE_SUM
        elif den is not _ONE_SUM:
            # divide both by the leading monomial of den; den = 1 when monomial
            e0, c0 = den.terms[0]
            if len(den.terms) == 1:
                num = num.shift(-e0, 1 / c0)
                den = _ONE_SUM
            elif e0 != ZERO or c0 != 1:
                num = num.shift(-e0, 1 / c0)
                den = den.shift(-e0, 1 / c0)
        self.num = num
        self.den = den
        self._val = None

    @property
    def val(self) -> ExtScalar:
        if self._val is None:
            self._val = self.num.min_exponent()  # den has least exponent 0
        return self._val

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def leading_coeff(self) -> Fraction:
        """Leading rational of num over leading rational of den (den is monic)."""
        return self.num.leading_coeff()

    def __add__(self, other: "FieldElem") -> "FieldElem":
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den is other.den or self.den == other.den:
            return FieldElem(self.num + other.num, self.den)
        return FieldElem(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "FieldElem":
        return FieldElem(-self.num, self.den)

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        return self + (-other)

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        if self.num.is_zero() or other.num.is_zero():
            return ZERO_ELEM
        if self.den is _ONE_SUM and other.den is _ONE_SUM:
            return FieldElem(self.num * other.num)
        return FieldElem(self.num * other.num, self.den * other.den)

    def inv(self) -> "FieldElem":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return FieldElem(self.den, self.num)

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        return self * other.inv()

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldElem):
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return self.num * other.den == other.num * self.den

    def __hash__(self) -> int:
        # equal fractions share valuation and leading coefficient
        return hash((self.val, self.leading_coeff()))

    def __repr__(self) -> str:
        return f"FieldElem({format_field(self)!r})"

    def __str__(self) -> str:
        return format_field(self)


def monomial(gamma: GroupScalar, coeff: Fraction | int = 1) -> FieldElem:
    """``coeff * t^gamma``."""
    if coeff == 0:
        return ZERO_ELEM
    return FieldElem(MonomialSum._sorted(((gamma, Fraction(coeff)),)))


ZERO_ELEM = FieldElem(_ZERO_SUM)
ONE_ELEM = FieldElem(_ONE_SUM)


def field_zero() -> FieldElem:
    return ZERO_ELEM


def field_one() -> FieldElem:
    return ONE_ELEM


def val(x: FieldElem) -> ExtScalar:
    return x.val


def in_R(x: FieldElem) -> bool:
    return x.val >= ZERO


def divide_in_R(a: FieldElem, b: FieldElem) -> FieldElem:
    """The quotient q = b/a, required to lie in R."""
    if a.is_zero():
        raise ZeroDivisionError("divisor is zero")
    if a.val < ZERO:
        raise NotDivisibleError(f"divisor {a} is not in R")
    if b.val < a.val:
        raise NotDivisibleError(f"val({b}) < val({a}); quotient leaves R")
    return b / a


def check_exponents(x: FieldElem, g: ValueGroup) -> bool:
    """All exponents of num and den lie in g."""
    return all(in_group(e, g) for e, _ in x.num.terms + x.den.terms)


# ---------------------------------------------------------------------------
# text form: "c1*t^(e1) + c2*t^(e2)"; fractions "(num)/(den)"
# ---------------------------------------------------------------------------

def format_sum(s: MonomialSum) -> str:
    if not s.terms:
        return "0"
    return " + ".join(f"{c}*t^({format_scalar(e)})" for e, c in s.terms)


def format_field(x: FieldElem) -> str:
    if x.den == _ONE_SUM:
        return f"({format_sum(x.num)})"
    return f"({format_sum(x.num)})/({format_sum(x.den)})"


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur, i = [], 0, [], 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and text.startswith(sep, i):
            parts.append("".join(cur))
            cur = []
            i += len(sep)
            continue
        cur.append(ch)
        i += 1
    parts.append("".join(cur))
    return parts


def _parse_term(text: str) -> tuple[GroupScalar, Fraction]:
    t = text.strip()
    if "t^" not in t and t != "t":
        return ZERO, Fraction(t)
    if t.startswith("-t") or t.startswith("t"):
        coeff = Fraction(-1 if t.startswith("-") else 1)
        rest = t.lstrip("-")
    else:
        c, _, rest = t.partition("*")
        coeff = Fraction(c.strip())
        rest = rest.strip()
    if rest == "t":
        return ONE_EXP, coeff
    if not (rest.startswith("t^(") and rest.endswith(")")):
        if rest.startswith("t^"):
            return parse_scalar(rest[2:]), coeff
        raise ValueError(f"cannot parse monomial {text!r}")
    return parse_scalar(rest[3:-1]), coeff


ONE_EXP = GroupScalar(1)


def parse_sum(text: str) -> MonomialSum:
    t = text.strip()
    if t in ("", "0"):
        return _ZERO_SUM
    return MonomialSum(_parse_term(p) for p in _split_top(t, " + "))


@functools.lru_cache(maxsize=8192)
def parse_field(text: str) -> FieldElem:
    """Inverse of :func:`format_field`; a bare monomial sum is also accepted."""
    t = text.strip()
    parts = _split_top(t, "/")
    if len(parts) == 2 and parts[0].strip().startswith("(") and parts[1].strip().startswith("("):
        num, den = parts[0].strip()[1:-1], parts[1].strip()[1:-1]
        return FieldElem(parse_sum(num), parse_sum(den))
    if t.startswith("(") and t.endswith(")") and len(_split_top(t[1:-1], ")(")) == 1 and _balanced(t[1:-1]):
        t = t[1:-1]
    return FieldElem(parse_sum(t))


def _balanced(text: str) -> bool:
    depth = 0
    for ch in text:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return False
    return depth == 0
