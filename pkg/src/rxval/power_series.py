"""Desk-scale elements of R[[X]] and the filtrations v_lambda, v_0.

Two kinds of series:

* :class:`SeriesPoly` -- the first N coefficients.  It stands for every series
  with that prefix whose unknown coefficients have valuation at least
  ``tail_floor`` (0 unless more is known), so every answer carries an
  ``exact`` flag saying whether it holds for the whole coset.
* :class:`CertifiedSeries` -- a prefix plus a :class:`TailRule` that produces
  every later coefficient and states the infimum of their valuations.  Only
  these have a computable v_0.
"""
from __future__ import annotations

import csv
import io
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from rxval.base_field import (
    ONE_ELEM,
    ZERO_ELEM,
    FieldElem,
    format_field,
    in_R,
    monomial,
    parse_field,
)
from rxval.value_group import (
    INF,
    ZERO,
    ExtScalar,
    GroupScalar,
    Infinity,
    ValueGroup,
    format_ext,
    format_scalar,
    iter_decreasing,
    parse_ext,
    parse_scalar,
)

__all__ = [
    "CertificateError",
    "SeriesPoly",
    "CertifiedSeries",
    "TailRule",
    "ZeroTail",
    "ConstantTail",
    "SequenceTail",
    "ScaledTail",
    "ConvolutionTail",
    "VLambdaResult",
    "NewtonPolygon",
    "FiltrationReport",
    "series",
    "certified",
    "v_lambda",
    "brute_force_v_lambda",
    "v_zero",
    "add",
    "mul",
    "neg",
    "mul_certified",
    "newton_polygon",
    "check_filtration_axioms",
    "continuity_lambda",
    "chi_table",
    "chi_csv",
    "serialize_series",
    "deserialize_series",
]

Series = Union["SeriesPoly", "CertifiedSeries"]


class CertificateError(ValueError):
    """A v_0 question was asked of a series without a usable certificate."""


def _vals(coeffs: Sequence[FieldElem]) -> tuple[ExtScalar, ...]:
    return tuple(c.val for c in coeffs)


def _min_ext(values: Iterable[ExtScalar]) -> ExtScalar:
    out: ExtScalar = INF
    for v in values:
        if v < out:
            out = v
    return out


@dataclass(frozen=True, eq=False)
class SeriesPoly:
    """Coefficients r_0..r_{N-1}; unknown r_n (n >= N) have val >= tail_floor."""

    coeffs: tuple[FieldElem, ...]
    tail_floor: ExtScalar = ZERO

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if not self.coeffs:
            raise ValueError("a truncated series needs order N >= 1")
        for n, c in enumerate(self.coeffs):
            if not in_R(c):
                raise ValueError(f"coefficient {n} = {c} is not in R")
        if self.tail_floor < ZERO:
            raise ValueError("tail coefficients live in R; floor must be >= 0")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def vals(self) -> tuple[ExtScalar, ...]:
        return _vals(self.coeffs)

    def lower_bound(self) -> ExtScalar:
        """A lower bound for the valuation of every coefficient, known or not."""
        return _min_ext(self.vals() + (self.tail_floor,))

    def is_zero_known(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def truncate(self, n: int) -> "SeriesPoly":
        if n >= self.order:
            return self
        return SeriesPoly(self.coeffs[:n], _min_ext(self.vals()[n:] + (self.tail_floor,)))

    def same_prefix(self, other: "SeriesPoly", order: int | None = None) -> bool:
        n = min(self.order, other.order) if order is None else order
        return all(a == b for a, b in zip(self.coeffs[:n], other.coeffs[:n]))

    def __add__(self, other: "SeriesPoly") -> "SeriesPoly":
        return add(self, other)

    def __sub__(self, other: "SeriesPoly") -> "SeriesPoly":
        return add(self, neg(other))

    def __mul__(self, other: "SeriesPoly") -> "SeriesPoly":
        return mul(self, other)

    def __neg__(self) -> "SeriesPoly":
        return neg(self)

    def __str__(self) -> str:
        terms = [f"[{format_field(c)}]*X^{n}" for n, c in enumerate(self.coeffs) if not c.is_zero()]
        return (" + ".join(terms) or "0") + f" + O(X^{self.order})"


def series(coeffs: Iterable[FieldElem], tail_floor: ExtScalar = ZERO) -> SeriesPoly:
    return SeriesPoly(tuple(coeffs), tail_floor)


# ---------------------------------------------------------------------------
# tail rules
# ---------------------------------------------------------------------------

class TailRule:
    """Coefficients r_n for n >= start, with nonincreasing valuations whose
    infimum is ``inf``.  ``positive`` marks rules whose every coefficient is a
    sum of monomials with positive rational coefficients and whose valuations
    are nonincreasing from index 0 (the shape closed under products)."""

    name = "abstract"
    positive = False

    def __init__(self) -> None:
        self._cache: dict[int, FieldElem] = {}
        self._lock = threading.Lock()

    @property
    def inf(self) -> ExtScalar:
        raise NotImplementedError

    def _coeff(self, n: int) -> FieldElem:
        raise NotImplementedError

    def coeff(self, n: int) -> FieldElem:
        c = self._cache.get(n)
        if c is None:
            c = self._coeff(n)
            with self._lock:
                self._cache[n] = c
        return c

    def val(self, n: int) -> ExtScalar:
        return self.coeff(n).val

    def params(self) -> dict[str, str]:
        return {}


class ZeroTail(TailRule):
    name = "zero"
    positive = True

    @property
    def inf(self) -> ExtScalar:
        return INF

    def _coeff(self, n: int) -> FieldElem:
        return ZERO_ELEM

    def val(self, n: int) -> ExtScalar:
        return INF


class ConstantTail(TailRule):
    """r_n = t^level for every tail index."""

    name = "constant"
    positive = True

    def __init__(self, level: GroupScalar) -> None:
        super().__init__()
        if level < ZERO:
            raise ValueError("tail level must be >= 0")
        self.level = level

    @property
    def inf(self) -> ExtScalar:
        return self.level

    def _coeff(self, n: int) -> FieldElem:
        return monomial(self.level)

    def val(self, n: int) -> ExtScalar:
        return self.level

    def params(self) -> dict[str, str]:
        return {"level": format_scalar(self.level)}


class SequenceTail(TailRule):
    """r_n = t^(alpha_{n+1}) for the decreasing group sequence alpha_k -> limit."""

    name = "sequence"
    positive = True

    def __init__(self, limit: GroupScalar, group: ValueGroup) -> None:
        super().__init__()
        self.limit = limit
        self.group = group
        self._gen = iter_decreasing(limit, group)  # validates limit
        self._terms: list[GroupScalar] = []
        self._gen_lock = threading.Lock()

    def exponent(self, n: int) -> GroupScalar:
        if n >= len(self._terms):
            with self._gen_lock:
                while n >= len(self._terms):
                    self._terms.append(next(self._gen))
        return self._terms[n]

    @property
    def inf(self) -> ExtScalar:
        return self.limit

    def _coeff(self, n: int) -> FieldElem:
        return monomial(self.exponent(n))

    def val(self, n: int) -> ExtScalar:
        return self.exponent(n)

    def params(self) -> dict[str, str]:
        return {"limit": format_scalar(self.limit), "group": self.group.value}


class ScaledTail(TailRule):
    """Coefficients of ``factor * X^shift * base`` (factor a nonzero element of F)."""

    name = "scaled"

    def __init__(self, base: "CertifiedSeries", factor: FieldElem, shift: int = 0) -> None:
        super().__init__()
        if factor.is_zero():
            raise ValueError("zero scale factor")
        self.base = base
        self.factor = factor
        self.shift = shift
        self.positive = base.positive and factor.den.terms == ONE_ELEM.den.terms and all(
            c > 0 for _, c in factor.num.terms
        ) and shift == 0

    @property
    def inf(self) -> ExtScalar:
        return self.factor.val + self.base.tail.inf

    def _coeff(self, n: int) -> FieldElem:
        j = n - self.shift
        return ZERO_ELEM if j < 0 else self.factor * self.base.coeff(j)

    def val(self, n: int) -> ExtScalar:
        j = n - self.shift
        return INF if j < 0 else self.factor.val + self.base.val(j)


class ConvolutionTail(TailRule):
    """Cauchy product of two positive series: no cancellation can occur, so the
    valuations are the min-plus convolution of the factors' valuations."""

    name = "convolution"
    positive = True

    def __init__(self, f: "CertifiedSeries", g: "CertifiedSeries") -> None:
        super().__init__()
        if not (f.positive and g.positive):
            raise CertificateError("convolution certificate needs positive monotone factors")
        self.f = f
        self.g = g

    @property
    def inf(self) -> ExtScalar:
        # no cancellation, and one factor has full nonincreasing support, so
        # the product valuations decrease to v_0(f) + v_0(g)
        return v_zero(self.f) + v_zero(self.g)

    def _coeff(self, n: int) -> FieldElem:
        acc = ZERO_ELEM
        for i in range(n + 1):
            a = self.f.coeff(i)
            if a.is_zero():
                continue
            b = self.g.coeff(n - i)
            if not b.is_zero():
                acc = acc + a * b
        return acc

    def val(self, n: int) -> ExtScalar:
        return _min_ext(self.f.val(i) + self.g.val(n - i) for i in range(n + 1))


# ---------------------------------------------------------------------------
# certified series
# ---------------------------------------------------------------------------

class CertifiedSeries:
    """A prefix plus a tail rule; v_0 is min(prefix valuations, tail infimum)."""

    __slots__ = ("prefix", "tail")

    def __init__(self, prefix: SeriesPoly, tail: TailRule) -> None:
        if not isinstance(prefix, SeriesPoly):
            prefix = SeriesPoly(tuple(prefix))
        self.prefix = prefix
        self.tail = tail
        if tail.inf < ZERO:
            raise ValueError("tail infimum must be >= 0")

    @property
    def start(self) -> int:
        return self.prefix.order

    @property
    def positive(self) -> bool:
        """Every coefficient positive and valuations nonincreasing from index 0."""
        if not self.tail.positive:
            return False
        prev: ExtScalar = INF
        for c in self.prefix.coeffs:
            if c.is_zero():
                return False
            if c.den.terms != ONE_ELEM.den.terms or any(k <= 0 for _, k in c.num.terms):
                return False
            if c.val > prev:
                return False
            prev = c.val
        if isinstance(self.tail.inf, Infinity):
            return True
        return not self.tail.val(self.start) > prev

    def coeff(self, n: int) -> FieldElem:
        if n < self.start:
            return self.prefix.coeffs[n]
        return self.tail.coeff(n)

    def val(self, n: int) -> ExtScalar:
        if n < self.start:
            return self.prefix.coeffs[n].val
        return self.tail.val(n)

    def coeffs(self, order: int) -> tuple[FieldElem, ...]:
        return tuple(self.coeff(n) for n in range(order))

    def tail_floor_from(self, order: int) -> ExtScalar:
        """Lower bound for val(r_n), n >= order."""
        extra = tuple(self.val(n) for n in range(order, self.start))
        return _min_ext(extra + (self.tail.inf,))

    def truncate(self, order: int) -> SeriesPoly:
        return SeriesPoly(self.coeffs(order), self.tail_floor_from(order))

    def __str__(self) -> str:
        params = ", ".join(f"{k}={v}" for k, v in self.tail.params().items())
        return f"{self.prefix} | tail {self.tail.name}({params}) inf={format_ext(self.tail.inf)}"


def certified(coeffs: Iterable[FieldElem], tail: TailRule | None = None) -> CertifiedSeries:
    return CertifiedSeries(SeriesPoly(tuple(coeffs)), tail if tail is not None else ZeroTail())


def check_certificate(f: CertifiedSeries, upto: int) -> bool:
    """Sample the tail up to ``upto``: stated valuations are realized, nonincreasing, >= inf."""
    prev: ExtScalar = INF
    for n in range(f.start, upto):
        v = f.tail.val(n)
        if f.tail.coeff(n).val != v or v > prev or v < f.tail.inf:
            return False
        prev = v
    return True


# ---------------------------------------------------------------------------
# v_lambda
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VLambdaResult:
    value: ExtScalar
    argmin: tuple[int, ...]
    exact: bool
    window_end: int

    def __str__(self) -> str:
        idx = ";".join(map(str, self.argmin))
        return f"value={format_ext(self.value)} argmin={idx} exact={self.exact} window_end={self.window_end}"


def _window(vals: Sequence[ExtScalar], lam: GroupScalar, floor: ExtScalar) -> VLambdaResult:
    N = len(vals)
    m = next((n for n, v in enumerate(vals) if not isinstance(v, Infinity)), None)
    tail_cost = floor if isinstance(floor, Infinity) else floor.add_int_multiple(lam, N)
    if m is None:
        return VLambdaResult(INF, (), isinstance(floor, Infinity), N)
    # least k > m with v(r_m) < (k - m) * lam
    k = m + (vals[m] / lam).floor() + 1
    best: ExtScalar = INF
    arg: list[int] = []
    for n in range(m, min(k, N)):
        v = vals[n]
        if isinstance(v, Infinity):
            continue
        cost = v.add_int_multiple(lam, n)
        c = cost._cmp(best) if isinstance(best, GroupScalar) else -1
        if c < 0:
            best, arg = cost, [n]
        elif c == 0:
            arg.append(n)
    if k <= N or best < tail_cost:
        return VLambdaResult(best, tuple(arg), True, k)
    return VLambdaResult(tail_cost if tail_cost < best else best, tuple(arg), False, k)


def v_lambda(f: Series, lam: GroupScalar, max_terms: int = 4096) -> VLambdaResult:
    """v_lambda(f) = inf_n v(r_n) + lam*n for lam > 0, by the finite-window argument.

    Certified series are materialized further (up to ``max_terms``) until the
    answer no longer depends on the tail.
    """
    if not lam > ZERO:
        raise ValueError("v_lambda needs lam > 0; use v_zero for lam = 0")
    if isinstance(f, SeriesPoly):
        return _window(f.vals(), lam, f.tail_floor)
    order = max(f.start, 1)
    while True:
        vals = tuple(f.val(n) for n in range(order))
        res = _window(vals, lam, f.tail_floor_from(order))
        if res.exact or order >= max_terms:
            return res
        target = res.window_end if res.value is not INF else 2 * order
        order = min(max_terms, max(order + 1, min(2 * order, target)))


def brute_force_v_lambda(f: SeriesPoly, lam: GroupScalar) -> tuple[ExtScalar, tuple[int, ...]]:
    """min over every known index of v(r_n) + lam*n, ignoring windows and tails."""
    best: ExtScalar = INF
    arg: list[int] = []
    for n, c in enumerate(f.coeffs):
        if c.is_zero():
            continue
        cost = c.val + lam * n
        if cost < best:
            best, arg = cost, [n]
        elif cost == best:
            arg.append(n)
    return best, tuple(arg)


def v_zero(f: CertifiedSeries) -> ExtScalar:
    """v_0(f) = inf_n v(r_n); needs a certificate because the inf may be a limit."""
    if not isinstance(f, CertifiedSeries):
        raise CertificateError(
            "v_0 of a bare truncation is undetermined; only the bound "
            "min(known vals, tail floor) is available"
        )
    return _min_ext(f.prefix.vals() + (f.tail.inf,))


def known_min(f: SeriesPoly) -> ExtScalar:
    """Upper bound for v_0 of any series with this prefix."""
    return _min_ext(f.vals())


# ---------------------------------------------------------------------------
# ring operations on truncations
# ---------------------------------------------------------------------------

def add(f: SeriesPoly, g: SeriesPoly) -> SeriesPoly:
    n = min(f.order, g.order)
    floor = _min_ext((f.truncate(n).tail_floor, g.truncate(n).tail_floor))
    return SeriesPoly(tuple(a + b for a, b in zip(f.coeffs[:n], g.coeffs[:n])), floor)


def neg(f: SeriesPoly) -> SeriesPoly:
    return SeriesPoly(tuple(-c for c in f.coeffs), f.tail_floor)


def _cauchy(a: Sequence[FieldElem], b: Sequence[FieldElem], n: int) -> tuple[FieldElem, ...]:
    out = [ZERO_ELEM] * n
    nz_b = [(j, c) for j, c in enumerate(b[:n]) if not c.is_zero()]
    for i, x in enumerate(a[:n]):
        if x.is_zero():
            continue
        for j, y in nz_b:
            if i + j >= n:
                break
            out[i + j] = out[i + j] + x * y
    return tuple(out)


def mul(f: SeriesPoly, g: SeriesPoly) -> SeriesPoly:
    """Cauchy product, exact below min(orders)."""
    n = min(f.order, g.order)
    lf, lg = f.lower_bound(), g.lower_bound()
    if isinstance(f.tail_floor, Infinity) and isinstance(g.tail_floor, Infinity):
        # both are polynomials: the product is known in full
        n = f.order + g.order - 1
        a = f.coeffs + (ZERO_ELEM,) * (n - f.order)
        b = g.coeffs + (ZERO_ELEM,) * (n - g.order)
        return SeriesPoly(_cauchy(a, b, n), INF)
    return SeriesPoly(_cauchy(f.coeffs, g.coeffs, n), lf + lg)


def scale(f: SeriesPoly, c: FieldElem) -> SeriesPoly:
    """c * f for c in R."""
    return SeriesPoly(tuple(c * x for x in f.coeffs), c.val + f.tail_floor)


def _single_term(f: CertifiedSeries) -> tuple[int, FieldElem] | None:
    if not isinstance(f.tail, ZeroTail):
        return None
    nz = [(n, c) for n, c in enumerate(f.prefix.coeffs) if not c.is_zero()]
    return nz[0] if len(nz) == 1 else None


def _as_poly(f: CertifiedSeries) -> CertifiedSeries:
    """Every tail rule here with infimum inf is identically zero; say so."""
    if isinstance(f.tail.inf, Infinity) and not isinstance(f.tail, ZeroTail):
        return CertifiedSeries(f.prefix, ZeroTail())
    return f


def mul_certified(f: CertifiedSeries, g: CertifiedSeries) -> CertifiedSeries:
    """Product with an assembled certificate, for the shapes where one exists:

    * both factors polynomials (zero tails),
    * one factor a single term c*X^k (zero tail),
    * both factors positive with nonincreasing valuations.

    Anything else raises :class:`CertificateError`.
    """
    f, g = _as_poly(f), _as_poly(g)
    if isinstance(f.tail, ZeroTail) and isinstance(g.tail, ZeroTail):
        p = mul(SeriesPoly(f.prefix.coeffs, INF), SeriesPoly(g.prefix.coeffs, INF))
        return CertifiedSeries(SeriesPoly(p.coeffs), ZeroTail())
    for a, b in ((f, g), (g, f)):
        term = _single_term(a)
        if term is not None:
            k, c = term
            start = b.start + k
            prefix = tuple(ZERO_ELEM if n < k else c * b.coeff(n - k) for n in range(start))
            return CertifiedSeries(SeriesPoly(prefix), ScaledTail(b, c, k))
    if f.positive and g.positive:
        tail = ConvolutionTail(f, g)
        start = max(f.start, g.start)
        return CertifiedSeries(SeriesPoly(tuple(tail.coeff(n) for n in range(start))), tail)
    raise CertificateError("no product certificate for these shapes")


def scale_certified(f: CertifiedSeries, c: FieldElem) -> CertifiedSeries:
    """c * f for a nonzero c in F (the result must stay in R[[X]])."""
    prefix = tuple(c * x for x in f.prefix.coeffs)
    return CertifiedSeries(SeriesPoly(prefix), ScaledTail(f, c, 0))


# ---------------------------------------------------------------------------
# Newton polygon
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NewtonPolygon:
    """chi(lam) = min_n v(r_n) + lam*n over the known support, lam >= 0.

    ``pieces`` lists (start, n, v(r_n)): on [start, next start) the minimum is
    the line of index n.  ``exact_from`` is the slope beyond which the known
    support decides the true chi: for lam > exact_from every unknown term
    costs strictly more.
    """

    pieces: tuple[tuple[GroupScalar, int, GroupScalar], ...]
    order: int
    tail_floor: ExtScalar
    exact_from: GroupScalar

    def __call__(self, lam: GroupScalar) -> GroupScalar:
        start, n, v = self.pieces[0]
        for s, m, w in self.pieces[1:]:
            if s > lam:
                break
            n, v = m, w
        return v + lam * n

    @property
    def breakpoints(self) -> list[tuple[GroupScalar, GroupScalar]]:
        return [(s, v + s * n) for s, n, v in self.pieces]

    def is_exact(self, lam: GroupScalar) -> bool:
        if isinstance(self.tail_floor, Infinity):
            return True
        return self(lam) < self.tail_floor + lam * self.order

    def describe_domain(self) -> str:
        if isinstance(self.tail_floor, Infinity):
            return "exact for all lam >= 0"
        return f"exact for lam > {format_scalar(self.exact_from)}"


def newton_polygon(f: Series, order: int | None = None) -> NewtonPolygon:
    if isinstance(f, CertifiedSeries):
        n = f.start if order is None else order
        f = f.truncate(n)
    pts = [(n, v) for n, v in enumerate(f.vals()) if not isinstance(v, Infinity)]
    if not pts:
        raise ValueError("Newton polygon of a series with no known nonzero coefficient")
    cur_n, cur_v = min(pts, key=lambda p: (p[1], p[0]))
    pieces = [(ZERO, cur_n, cur_v)]
    lam = ZERO
    while True:
        nxt = None
        for n, v in pts:
            if n >= cur_n:
                continue
            cross = (v - cur_v) / (cur_n - n)
            if cross < lam:
                continue
            if nxt is None or cross < nxt[0] or (cross == nxt[0] and n < nxt[1]):
                nxt = (cross, n, v)
        if nxt is None:
            break
        lam, cur_n, cur_v = nxt
        pieces.append(nxt)
    poly = NewtonPolygon(tuple(pieces), f.order, f.tail_floor, ZERO)
    return NewtonPolygon(poly.pieces, poly.order, poly.tail_floor, _exact_from(poly))


def _exact_from(poly: NewtonPolygon) -> GroupScalar:
    floor = poly.tail_floor
    if isinstance(floor, Infinity) or poly(ZERO) < floor:
        return ZERO
    # chi - floor - lam*N is strictly decreasing; find its zero piece by piece
    N = poly.order
    pieces = poly.pieces
    for i, (s, n, v) in enumerate(pieces):
        cross = (v - floor) / (N - n)
        end = pieces[i + 1][0] if i + 1 < len(pieces) else None
        if cross >= s and (end is None or cross <= end):
            return cross
    raise AssertionError("unreachable: crossing must exist")


# ---------------------------------------------------------------------------
# checks and tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiltrationReport:
    status: str  # "pass", "fail" or "inconclusive"
    lam: GroupScalar
    v_f: VLambdaResult
    v_g: VLambdaResult
    v_sum: VLambdaResult
    v_prod: VLambdaResult

    @property
    def ok(self) -> bool:
        return self.status != "fail"


def check_filtration_axioms(f: SeriesPoly, g: SeriesPoly, lam: GroupScalar) -> FiltrationReport:
    """v(f+g) >= min(v f, v g) and v(fg) = v f + v g at this lam."""
    rf, rg = v_lambda(f, lam), v_lambda(g, lam)
    rs, rp = v_lambda(add(f, g), lam), v_lambda(mul(f, g), lam)
    if not all(r.exact for r in (rf, rg, rs, rp)):
        return FiltrationReport("inconclusive", lam, rf, rg, rs, rp)
    ok = rs.value >= min(rf.value, rg.value) and rp.value == rf.value + rg.value
    return FiltrationReport("pass" if ok else "fail", lam, rf, rg, rs, rp)


def continuity_lambda(f: CertifiedSeries, eps: GroupScalar, max_terms: int = 4096) -> tuple[GroupScalar, int]:
    """A slope lam' > 0 with chi_f(lam') - v_0(f) < eps.

    Find n with v(r_n) < eps + v_0(f); for n > 0 any lam' below
    (eps + v_0(f) - v(r_n)) / n works, and half of it is taken.
    """
    if not eps > ZERO:
        raise ValueError("eps must be positive")
    base = v_zero(f)
    if isinstance(base, Infinity):
        raise ValueError("zero series")
    target = base + eps
    for n in range(max_terms):
        v = f.val(n)
        if v < target:
            if n == 0:
                return GroupScalar(1), 0
            return (target - v) / (2 * n), n
    raise RuntimeError(f"no coefficient within eps of v_0 below index {max_terms}")


def chi_table(f: Series, lambdas: Sequence[GroupScalar]) -> list[VLambdaResult]:
    return [v_lambda(f, lam) for lam in lambdas]


def geometric_grid(lam0: GroupScalar, steps: int) -> list[GroupScalar]:
    """lam_k = lam0 * 2**-k for k = 1..steps."""
    return [lam0 * Fraction(1, 2**k) for k in range(1, steps + 1)]


def chi_csv(lambdas: Sequence[GroupScalar], rows: Sequence[VLambdaResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda", "chi_value", "exact_flag", "argmin_indices"])
    for lam, r in zip(lambdas, rows):
        w.writerow([format_scalar(lam), format_ext(r.value), str(r.exact).lower(), ";".join(map(str, r.argmin))])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# literals: coefficient list plus optional certificate block
# ---------------------------------------------------------------------------

def tail_from_spec(rule: str, params: dict[str, str]) -> TailRule:
    rule = rule.strip().lower()
    if rule == "zero":
        return ZeroTail()
    if rule == "constant":
        return ConstantTail(parse_scalar(params["level"]))
    if rule == "sequence":
        return SequenceTail(parse_scalar(params["limit"]), ValueGroup(params.get("group", "RATIONALS")))
    raise ValueError(f"unknown tail rule {rule!r}")


def parse_coeff_list(text: str) -> tuple[FieldElem, ...]:
    return tuple(parse_field(p) for p in text.split(";") if p.strip())


def serialize_series(f: Series) -> dict[str, str]:
    """Flat key/value form; only zero/constant/sequence tails are expressible."""
    if isinstance(f, SeriesPoly):
        return {"coeffs": "; ".join(format_field(c) for c in f.coeffs), "tail_floor": format_ext(f.tail_floor)}
    if f.tail.name not in ("zero", "constant", "sequence"):
        raise CertificateError(f"tail rule {f.tail.name!r} has no literal form")
    out = {"coeffs": "; ".join(format_field(c) for c in f.prefix.coeffs), "tail": f.tail.name}
    out.update({f"tail.{k}": v for k, v in f.tail.params().items()})
    return out


def deserialize_series(d: dict[str, str]) -> Series:
    coeffs = parse_coeff_list(d["coeffs"])
    if "tail" not in d:
        return SeriesPoly(coeffs, parse_ext(d.get("tail_floor", "0")))
    params = {k[5:]: v for k, v in d.items() if k.startswith("tail.")}
    return CertifiedSeries(SeriesPoly(coeffs), tail_from_spec(d["tail"], params))
