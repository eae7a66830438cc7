"""Exact ordered arithmetic in Q(sqrt2) and the two dense value groups.

Every valuation, slope and threshold in the package is a :class:`GroupScalar`
``a + b*sqrt2`` with rational ``a, b``.  Internally the value is kept as a
reduced integer triple ``(A + B*sqrt2) / D`` so that order tests and sums stay
in machine-friendly integer arithmetic.
"""
from __future__ import annotations

import enum
import functools
import itertools
import math
import re
from fractions import Fraction
from typing import Iterator, Union

from rxval import _kernels

__all__ = [
    "GroupScalar",
    "INF",
    "Infinity",
    "ExtScalar",
    "ValueGroup",
    "NotInGroupError",
    "ZERO",
    "ONE",
    "SQRT2",
    "compare",
    "in_group",
    "height",
    "find_in_interval",
    "decreasing_sequence",
    "iter_decreasing",
    "parse_scalar",
    "format_scalar",
    "parse_ext",
    "format_ext",
]


class NotInGroupError(ValueError):
    """A scalar violates a group membership precondition."""


RationalLike = Union[int, Fraction]


def _sign_pq(p: int, q: int) -> int:
    """Sign of p + q*sqrt2 for integers p, q."""
    if p >= 0 and q >= 0:
        return 1 if (p or q) else 0
    if p <= 0 and q <= 0:
        return -1
    # opposite signs: the larger magnitude wins; p^2 == 2q^2 only at 0
    if p * p > 2 * q * q:
        return 1 if p > 0 else -1
    return 1 if q > 0 else -1


def _floor3(A: int, B: int, D: int) -> int:
    """floor((A + B*sqrt2) / D) for D > 0."""
    if B == 0:
        return A // D
    s = math.isqrt(2 * B * B)  # floor(|B| sqrt2); never exact since B != 0
    n = A + (s if B > 0 else -s - 1)
    # value lies strictly inside (n, n+1) / D
    return n // D


class GroupScalar:
    """The real number ``a + b*sqrt2`` with rational a, b."""

    __slots__ = ("_A", "_B", "_D", "_hash")

    def __init__(self, a: RationalLike = 0, b: RationalLike = 0) -> None:
        if type(a) is int and type(b) is int:
            self._set(a, b, 1)
            return
        a = Fraction(a)
        b = Fraction(b)
        d = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        self._set(a.numerator * (d // a.denominator), b.numerator * (d // b.denominator), d)

    def _set(self, A: int, B: int, D: int) -> None:
        g = math.gcd(A, B, D)
        if g != 1:
            A //= g
            B //= g
            D //= g
        self._A = A
        self._B = B
        self._D = D
        self._hash = None

    @classmethod
    def _raw(cls, A: int, B: int, D: int) -> "GroupScalar":
        obj = cls.__new__(cls)
        obj._set(A, B, D)
        return obj

    @property
    def a(self) -> Fraction:
        return Fraction(self._A, self._D)

    @property
    def b(self) -> Fraction:
        return Fraction(self._B, self._D)

    def sign(self) -> int:
        return _sign_pq(self._A, self._B)

    def is_rational(self) -> bool:
        return self._B == 0

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, GroupScalar):
            if self._D == other._D:
                return GroupScalar._raw(self._A + other._A, self._B + other._B, self._D)
            return GroupScalar._raw(
                self._A * other._D + other._A * self._D,
                self._B * other._D + other._B * self._D,
                self._D * other._D,
            )
        if isinstance(other, (int, Fraction)):
            return self + GroupScalar(other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> "GroupScalar":
        return GroupScalar._raw(-self._A, -self._B, self._D)

    def __sub__(self, other):
        if isinstance(other, GroupScalar):
            return self + (-other)
        if isinstance(other, (int, Fraction)):
            return self + GroupScalar(-Fraction(other))
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return GroupScalar(other) - self
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupScalar._raw(self._A * other, self._B * other, self._D)
        if isinstance(other, Fraction):
            return GroupScalar._raw(
                self._A * other.numerator, self._B * other.numerator, self._D * other.denominator
            )
        if isinstance(other, GroupScalar):
            A1, B1, A2, B2 = self._A, self._B, other._A, other._B
            return GroupScalar._raw(A1 * A2 + 2 * B1 * B2, A1 * B2 + A2 * B1, self._D * other._D)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "GroupScalar":
        A, B, D = self._A, self._B, self._D
        norm = A * A - 2 * B * B
        if norm == 0:
            raise ZeroDivisionError("inverse of zero scalar")
        # D / (A + B s) = D (A - B s) / norm
        if norm < 0:
            return GroupScalar._raw(-D * A, D * B, -norm)
        return GroupScalar._raw(D * A, -D * B, norm)

    def __truediv__(self, other):
        if isinstance(other, int):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            if other < 0:
                return GroupScalar._raw(-self._A, -self._B, -other * self._D)
            return GroupScalar._raw(self._A, self._B, other * self._D)
        if isinstance(other, Fraction):
            return self * (1 / other)
        if isinstance(other, GroupScalar):
            return self * other.inverse()
        return NotImplemented

    def add_int_multiple(self, lam: "GroupScalar", n: int) -> "GroupScalar":
        """``self + lam*n`` without intermediate objects."""
        if self._D == lam._D:
            return GroupScalar._raw(self._A + lam._A * n, self._B + lam._B * n, self._D)
        return GroupScalar._raw(
            self._A * lam._D + lam._A * n * self._D,
            self._B * lam._D + lam._B * n * self._D,
            self._D * lam._D,
        )

    # -- order --------------------------------------------------------------
    def _cmp(self, other: "GroupScalar") -> int:
        if self._D == other._D:
            return _sign_pq(self._A - other._A, self._B - other._B)
        return _sign_pq(
            self._A * other._D - other._A * self._D,
            self._B * other._D - other._B * self._D,
        )

    def __eq__(self, other):
        if isinstance(other, GroupScalar):
            return self._A == other._A and self._B == other._B and self._D == other._D
        if isinstance(other, (int, Fraction)):
            return self._B == 0 and Fraction(self._A, self._D) == other
        if isinstance(other, Infinity):
            return False
        return NotImplemented

    def _order(self, other) -> int | None:
        if isinstance(other, GroupScalar):
            return self._cmp(other)
        if isinstance(other, (int, Fraction)):
            return self._cmp(GroupScalar(other))
        if isinstance(other, Infinity):
            return -1
        return None

    def __lt__(self, other):
        c = self._order(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._order(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._order(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._order(other)
        return NotImplemented if c is None else c >= 0

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._A, self._B, self._D))
        return self._hash

    def __float__(self) -> float:
        return float(Fraction(self._A, self._D)) + float(Fraction(self._B, self._D)) * math.sqrt(2)

    def floor(self) -> int:
        """Exact floor of the real number."""
        return _floor3(self._A, self._B, self._D)

    def ceil(self) -> int:
        return -((-self).floor())

    def __repr__(self) -> str:
        return f"GroupScalar({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)

    def __reduce__(self):
        return (GroupScalar, (self.a, self.b))


class Infinity:
    """The value of zero: larger than every GroupScalar, absorbing under +."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return isinstance(other, Infinity)

    def __hash__(self) -> int:
        return hash("rxval.INF")

    def __lt__(self, other):
        if isinstance(other, (GroupScalar, Infinity, int, Fraction)):
            return False
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, Infinity):
            return True
        if isinstance(other, (GroupScalar, int, Fraction)):
            return False
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, (GroupScalar, int, Fraction)):
            return True
        if isinstance(other, Infinity):
            return False
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, (GroupScalar, Infinity, int, Fraction)):
            return True
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, (GroupScalar, Infinity, int, Fraction)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Infinity):
            raise ArithmeticError("inf - inf is undefined")
        if isinstance(other, (GroupScalar, int, Fraction)):
            return self
        return NotImplemented

    def __repr__(self) -> str:
        return "INF"

    __str__ = __repr__

    def __reduce__(self):
        return (Infinity, ())


INF = Infinity()
ExtScalar = Union[GroupScalar, Infinity]

ZERO = GroupScalar(0)
ONE = GroupScalar(1)
SQRT2 = GroupScalar(0, 1)


def compare(x: GroupScalar, y: GroupScalar) -> int:
    """-1, 0 or 1 as x <, ==, > y (exact)."""
    return x._cmp(y)


class ValueGroup(enum.Enum):
    RATIONALS = "RATIONALS"
    Z_PLUS_Z_SQRT2 = "Z_PLUS_Z_SQRT2"

    @property
    def excluded(self) -> GroupScalar:
        """A designated scalar outside the group (witness of properness)."""
        if self is ValueGroup.RATIONALS:
            return GroupScalar(-1, 1)
        return GroupScalar(Fraction(1, 2))

    def __contains__(self, x) -> bool:
        return in_group(x, self)


def in_group(x: GroupScalar, g: ValueGroup) -> bool:
    if g is ValueGroup.RATIONALS:
        return x._B == 0
    return x._D == 1


def height(x: GroupScalar) -> int:
    a, b = x.a, x.b
    return abs(a.numerator) + a.denominator + abs(b.numerator) + b.denominator


# ---------------------------------------------------------------------------
# interval search
# ---------------------------------------------------------------------------

# indices below this are scanned exactly in Python; beyond it the float
# prefilter kernel proposes candidates which are then checked exactly
_EXACT_SCAN = 256
_MAX_BLOCK = 1 << 22


def _open_int_range(lo: GroupScalar, hi: GroupScalar) -> tuple[int, int]:
    """Integers p with lo < p < hi, as an inclusive (first, last) pair."""
    return lo.floor() + 1, hi.ceil() - 1


def _nearest_zero(first: int, last: int) -> list[int]:
    if first > last:
        return []
    if first > 0:
        return [first]
    if last < 0:
        return [last]
    return [0]


def _least_height(consider, kernel_scan, bound_of, lo: GroupScalar, hi: GroupScalar):
    """Scan index blocks of doubling size until the best height is certified.

    ``consider(i)`` updates the running best from index ``i`` (exactly);
    ``bound_of(best)`` is the largest index that could still beat ``best``.
    Blocks past ``_EXACT_SCAN`` only visit the kernel's float candidates.
    """
    state = {"best": None}
    start, limit = 0, _EXACT_SCAN
    lo_f, hi_f = float(lo), float(hi)
    while True:
        best = state["best"]
        end = limit if best is None else min(limit, bound_of(best))
        end = min(end, start + _MAX_BLOCK - 1)
        if end <= _EXACT_SCAN:
            indices = range(start, end + 1)
        else:
            indices = kernel_scan(lo_f, hi_f, start, end)
        for i in indices:
            consider(int(i), state)
        start = end + 1
        best = state["best"]
        if best is not None and start > bound_of(best):
            return best
        limit *= 2


def _simplest_positive(lo: GroupScalar, hi: GroupScalar | None) -> Fraction:
    """Simplest rational in (lo, hi) for 0 <= lo, hi = None meaning no bound.

    Continued-fraction descent: it has the least numerator and the least
    denominator of all rationals in the interval, hence the least height.
    """
    quotients: list[int] = []
    while True:
        n = lo.floor() + 1
        if hi is None or n < hi:
            break
        fl = lo.floor()
        quotients.append(fl)
        lo, hi = (hi - fl).inverse(), (None if lo == fl else (lo - fl).inverse())
    out = Fraction(n)
    for q in reversed(quotients):
        out = q + 1 / out
    return out


def _best_rational(lo: GroupScalar, hi: GroupScalar) -> GroupScalar:
    if lo < ZERO < hi:
        return ZERO
    if hi <= ZERO:
        return GroupScalar(-_simplest_positive(-hi, -lo))
    return GroupScalar(_simplest_positive(lo, hi))


def _best_rational_scan(lo: GroupScalar, hi: GroupScalar) -> GroupScalar:
    """Height-bounded scan over denominators; slower, kept as a cross-check."""

    def consider(q: int, state) -> None:
        if q == 0:
            return
        first, last = _open_int_range(lo * q, hi * q)
        for p in _nearest_zero(first, last):
            if math.gcd(p, q) != 1:
                continue  # already seen in lowest terms
            key = (abs(p) + q + 1, Fraction(p, q))
            if state["best"] is None or key < state["best"]:
                state["best"] = key

    best = _least_height(consider, _kernels.scan_rational, lambda b: b[0] - 1, lo, hi)
    return GroupScalar(best[1])


def _best_zsqrt2(lo: GroupScalar, hi: GroupScalar) -> GroupScalar:
    la, lb, ld = lo._A, lo._B, lo._D
    ha, hb, hd = hi._A, hi._B, hi._D

    def one(b: int, state) -> None:
        # integers a with lo < a + b*sqrt2 < hi
        first = _floor3(la, lb - b * ld, ld) + 1
        last = -_floor3(-ha, b * hd - hb, hd) - 1
        for a in _nearest_zero(first, last):
            key = (abs(a) + abs(b) + 2, a, b)
            if state["best"] is None or key < state["best"]:
                state["best"] = key

    def consider(mag: int, state) -> None:
        one(mag, state)
        if mag:
            one(-mag, state)

    best = _least_height(consider, _kernels.scan_zsqrt2, lambda b: b[0] - 2, lo, hi)
    return GroupScalar(best[1], best[2])


def find_in_interval(lo: GroupScalar, hi: GroupScalar, g: ValueGroup, method: str = "auto") -> GroupScalar:
    """Least-height element of ``g`` strictly inside ``(lo, hi)``.

    Ties in height go to the lexicographically smallest ``(a, b)``.  Over the
    rationals the answer comes from a continued-fraction descent;
    ``method="scan"`` forces the height-bounded scan instead.
    """
    if not lo < hi:
        raise ValueError(f"empty interval ({lo}, {hi})")
    if g is ValueGroup.RATIONALS:
        return _best_rational_scan(lo, hi) if method == "scan" else _best_rational(lo, hi)
    return _best_zsqrt2(lo, hi)


def _upper_convergents(x: GroupScalar):
    """Continued-fraction convergents of x lying strictly above x, in order."""
    h_prev, h = 1, x.floor()
    k_prev, k = 0, 1
    rest = x - h
    while True:
        c = GroupScalar(Fraction(h, k))
        if c > x:
            yield c
        if rest == ZERO:
            return
        rest = rest.inverse()
        a = rest.floor()
        rest = rest - a
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev


def iter_decreasing(target: GroupScalar, g: ValueGroup) -> Iterator[GroupScalar]:
    """Endless form of :func:`decreasing_sequence`; the k-th item (from 1) is
    the k-th term."""
    if target < ZERO:
        raise ValueError("target must be nonnegative")
    if in_group(target, g):
        raise NotInGroupError(f"target {target} lies in {g.value}; the limit must be outside the group")
    return _iter_rational(target) if g is ValueGroup.RATIONALS else _iter_unit_greedy(target)


def _iter_rational(target: GroupScalar) -> Iterator[GroupScalar]:
    conv = _upper_convergents(target)
    k = 1
    while True:
        bound = target + GroupScalar(Fraction(1, 2**k))
        c = next(conv)
        while not c < bound:
            c = next(conv)
        yield c
        k += 1


def _iter_unit_greedy(target: GroupScalar) -> Iterator[GroupScalar]:
    unit = GroupScalar(-1, 1)
    power, cur = ONE, GroupScalar(target.floor() + 1)
    k = 1
    while True:
        bound = GroupScalar(Fraction(1, 2**k))
        stepped = k == 1
        while not stepped or not cur - target < bound:
            gap = cur - target
            while not power < gap:
                power = power * unit
            cur = cur - power
            stepped = True
        yield cur
        k += 1


def decreasing_sequence(target: GroupScalar, g: ValueGroup, count: int) -> list[GroupScalar]:
    """Strictly decreasing elements of ``g`` above ``target`` with gap < 2**-k.

    Over the rationals these are the upper continued-fraction convergents of
    the target.  Over Z + Z*sqrt2 the terms come from a greedy expansion: start
    at the least integer above the target and repeatedly subtract the largest
    power of the unit ``sqrt2 - 1`` that keeps the value above the target.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    return list(itertools.islice(iter_decreasing(target, g), count))


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------

def _frac_str(x: Fraction) -> str:
    return str(x)  # "p" or "p/q", lowest terms


def format_scalar(x: GroupScalar) -> str:
    """Canonical ``a + b*sqrt2`` text, e.g. ``-1 + 1*sqrt2`` or ``1/2 + 0*sqrt2``."""
    a, b = x.a, x.b
    op = "-" if b < 0 else "+"
    return f"{_frac_str(a)} {op} {_frac_str(abs(b))}*sqrt2"


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:
          (?P<num>\d+(?:/\d+)?)(?:\s*\*\s*(?P<root>sqrt2|√2))?
          |(?P<bare>sqrt2|√2)
        )\s*""",
    re.VERBOSE,
)


@functools.lru_cache(maxsize=8192)
def parse_scalar(text: str) -> GroupScalar:
    """Parse ``a + b*sqrt2`` text; also accepts ``1/2``, ``sqrt2``, ``2 - sqrt2``."""
    s = text.strip()
    if not s:
        raise ValueError("empty scalar")
    a = Fraction(0)
    b = Fraction(0)
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse scalar {text!r}")
        if not first and m.group("sign") is None:
            raise ValueError(f"missing operator in scalar {text!r}")
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("bare"):
            b += sign
        elif m.group("root"):
            b += sign * Fraction(m.group("num"))
        else:
            a += sign * Fraction(m.group("num"))
        pos = m.end()
        first = False
    return GroupScalar(a, b)


def format_ext(x: ExtScalar) -> str:
    return "inf" if isinstance(x, Infinity) else format_scalar(x)


def parse_ext(text: str) -> ExtScalar:
    return INF if text.strip().lower() in ("inf", "infinity", "∞") else parse_scalar(text)
