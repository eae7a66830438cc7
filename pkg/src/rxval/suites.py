"""Seeded property sweeps shared by ``rxval selftest`` and the acceptance tests.

Every suite takes a :class:`random.Random` and a size, checks one family of
invariants with exact arithmetic, and returns a :class:`SuiteResult`.  A
failure records a replay line (suite, seed, case index) so the exact
counterexample can be regenerated.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from rxval.base_field import (
    ONE_ELEM,
    ZERO_ELEM,
    FieldElem,
    MonomialSum,
    monomial,
)
from rxval.graded import graded_mul, leading_form
from rxval.incoherence import (
    IncoherenceConfig,
    brute_force_generates,
    build_witness_series,
    critical_ideal,
    in_critical_ideal,
    intersection_membership,
    InconclusiveError,
    random_candidates,
    refute_generators,
    tamper_variants,
    verify_report,
)
from rxval.localization import (
    LocalFraction,
    PurityError,
    fractions_equal,
    invert,
    move_into_T,
    pure_divide,
    val_fraction,
)
from rxval.power_series import (
    CertificateError,
    CertifiedSeries,
    ConstantTail,
    SeriesPoly,
    SequenceTail,
    ZeroTail,
    brute_force_v_lambda,
    check_certificate,
    chi_table,
    continuity_lambda,
    geometric_grid,
    mul,
    mul_certified,
    scale,
    scale_certified,
    v_lambda,
    v_zero,
)
from rxval.value_group import (
    INF,
    ONE,
    SQRT2,
    ZERO,
    GroupScalar,
    Infinity,
    ValueGroup,
    decreasing_sequence,
    find_in_interval,
    format_scalar,
    in_group,
    parse_scalar,
)

__all__ = ["SuiteResult", "SUITES", "run_suites"]

Q = ValueGroup.RATIONALS
ZZ = ValueGroup.Z_PLUS_Z_SQRT2


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    skipped: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures and self.checked > 0

    def fail(self, seed: int, case: int, what: str) -> None:
        self.failures.append(f"replay: suite={self.name} seed={seed} case={case}: {what}")

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return f"{verdict} {self.name}: {self.checked} checked, {self.skipped} skipped, {len(self.failures)} failed ({self.seconds:.2f}s)"


# ---------------------------------------------------------------------------
# random objects
# ---------------------------------------------------------------------------

def rand_scalar(rng: random.Random, lo: int = -3, hi: int = 3, den: int = 12) -> GroupScalar:
    a = Fraction(rng.randint(lo * den, hi * den), rng.randint(1, den))
    b = Fraction(rng.randint(-2, 2), rng.randint(1, 4)) if rng.random() < 0.4 else 0
    return GroupScalar(a, b)


def rand_exponent(rng: random.Random, group: ValueGroup, top: int = 2) -> GroupScalar:
    """A nonnegative element of the group below ``top``."""
    if group is Q:
        d = rng.choice([1, 2, 3, 4, 6, 12])
        return GroupScalar(Fraction(rng.randint(0, top * d), d))
    while True:
        b = rng.randint(-2, 2)
        a = rng.randint(0, top + 3)
        x = GroupScalar(a, b)
        if ZERO <= x <= GroupScalar(top):
            return x


def rand_rat(rng: random.Random) -> Fraction:
    return Fraction(rng.choice([1, -1]) * rng.randint(1, 9), rng.randint(1, 6))


_POOLS: dict = {}


def _pool(group: ValueGroup, lo: int, top: int) -> tuple[tuple[GroupScalar, ...], tuple[Fraction, ...]]:
    """Fixed exponent and coefficient pools; drawing from them keeps generation cheap."""
    key = (group, lo, top)
    if key not in _POOLS:
        prng = random.Random(f"pool:{group.value}:{lo}:{top}")
        exps = tuple(sorted({rand_exponent(prng, group, top - lo) + lo for _ in range(400)}))
        rats = tuple(sorted({rand_rat(prng) for _ in range(200)}))
        _POOLS[key] = (exps, rats)
    return _POOLS[key]


def rand_sum(rng: random.Random, group: ValueGroup, terms: int, lo: int = -2, top: int = 2) -> MonomialSum:
    exps, rats = _pool(group, lo, top)
    return MonomialSum([(rng.choice(exps), rng.choice(rats)) for _ in range(terms)])


def rand_field(rng: random.Random, group: ValueGroup) -> FieldElem:
    if rng.random() < 0.05:
        return ZERO_ELEM
    num = rand_sum(rng, group, rng.randint(1, 3))
    while num.is_zero():
        num = rand_sum(rng, group, rng.randint(1, 3))
    den = rand_sum(rng, group, rng.randint(1, 2))
    while den.is_zero():
        den = rand_sum(rng, group, 1)
    return FieldElem(num, den)


def rand_R(rng: random.Random, group: ValueGroup, zero_p: float = 0.3, top: int = 2) -> FieldElem:
    """A sparse element of R: zero, a monomial, or a short sum of monomials."""
    if rng.random() < zero_p:
        return ZERO_ELEM
    if rng.random() < 0.8:
        return monomial(rand_exponent(rng, group, top), rand_rat(rng))
    while True:
        s = MonomialSum([(rand_exponent(rng, group, top), rand_rat(rng)) for _ in range(2)])
        if not s.is_zero():  # equal exponents with opposite coefficients cancel
            return FieldElem(s)


def rand_poly(rng: random.Random, group: ValueGroup, max_order: int = 64, zero_p: float = 0.3) -> SeriesPoly:
    n = rng.randint(1, max_order)
    coeffs = tuple(rand_R(rng, group, zero_p) for _ in range(n))
    floor_kind = rng.random()
    if floor_kind < 0.3:
        floor = INF
    elif floor_kind < 0.6:
        floor = ZERO
    else:
        floor = rand_exponent(rng, group, 2)
    return SeriesPoly(coeffs, floor)


def rand_lambda(rng: random.Random) -> GroupScalar:
    if rng.random() < 0.7:
        return GroupScalar(Fraction(rng.randint(1, 24), rng.randint(1, 16)))
    while True:
        lam = GroupScalar(Fraction(rng.randint(-4, 8), rng.randint(1, 8)), Fraction(rng.randint(1, 3), rng.randint(1, 4)))
        if lam > ZERO:
            return lam


def _tie_pair(rng: random.Random) -> tuple[SeriesPoly, GroupScalar]:
    """A polynomial whose v_lambda minimum is shared by two or three indices."""
    lam = GroupScalar(Fraction(rng.randint(1, 6), rng.randint(1, 4)))
    order = rng.randint(3, 8)
    base = GroupScalar(Fraction(rng.randint(0, 8), 4))
    idx = sorted(rng.sample(range(order), rng.randint(2, min(3, order))))
    coeffs = [ZERO_ELEM] * order
    top = base + lam * idx[-1]
    for n in idx:
        coeffs[n] = monomial(top - lam * n, rand_rat(rng))
    for n in range(order):
        if n not in idx and rng.random() < 0.5:
            # strictly above the tie line
            extra = GroupScalar(Fraction(rng.randint(1, 8), 4))
            coeffs[n] = monomial(top - lam * n + extra if top - lam * n + extra >= ZERO else extra, rand_rat(rng))
    return SeriesPoly(tuple(coeffs), INF), lam


def positive_sequence_series(rng: random.Random, group: ValueGroup, limit: GroupScalar, plen: int) -> CertifiedSeries:
    """Monomials t^(gamma_n) with gamma_n decreasing to ``limit`` (outside the group)."""
    exps = decreasing_sequence(limit, group, plen)
    coeffs = tuple(monomial(e, Fraction(rng.randint(1, 5), rng.randint(1, 3))) for e in exps)
    return CertifiedSeries(SeriesPoly(coeffs), SequenceTail(limit, group))


def rand_outside(rng: random.Random, group: ValueGroup) -> GroupScalar:
    """A nonnegative scalar outside the group."""
    if group is Q:
        return _pos_irrational(rng)
    while True:
        x = GroupScalar(Fraction(rng.randint(0, 12), rng.choice([2, 3, 4])), rng.randint(-1, 1))
        if x > ZERO and not in_group(x, group):
            return x


def _pos_irrational(rng: random.Random) -> GroupScalar:
    while True:
        x = GroupScalar(Fraction(rng.randint(-6, 10), rng.randint(1, 4)), Fraction(rng.choice([1, -1]), rng.randint(1, 3)))
        if x > ZERO:
            return x


def rand_certified(rng: random.Random, group: ValueGroup) -> CertifiedSeries:
    """Certified series of every tail shape; a quarter of them are positive sequence series."""
    kind = rng.randrange(4)
    if kind == 0:
        return positive_sequence_series(rng, group, rand_outside(rng, group), rng.randint(1, 5))
    coeffs = tuple(rand_R(rng, group, 0.3) for _ in range(rng.randint(1, 6)))
    if all(c.is_zero() for c in coeffs):
        coeffs = (monomial(rand_exponent(rng, group)),) + coeffs[1:]
    if kind == 1:
        tail = ZeroTail()
    elif kind == 2:
        tail = ConstantTail(rand_exponent(rng, group))
    else:
        tail = SequenceTail(rand_outside(rng, group), group)
    return CertifiedSeries(SeriesPoly(coeffs), tail)


def rand_unit(rng: random.Random, group: ValueGroup) -> CertifiedSeries:
    """An element of U: constant unit term, other coefficients in R."""
    kind = rng.randrange(3)
    if kind == 0:
        return CertifiedSeries(SeriesPoly((monomial(ZERO, Fraction(rng.randint(1, 5), rng.randint(1, 3))),)), ZeroTail())
    if kind == 1:
        coeffs = (monomial(ZERO, rand_rat(rng)),) + tuple(rand_R(rng, group, 0.5) for _ in range(rng.randint(0, 3)))
        return CertifiedSeries(SeriesPoly(coeffs), ZeroTail())
    # positive with nonincreasing valuations: every coefficient a unit
    coeffs = tuple(monomial(ZERO, Fraction(rng.randint(1, 5), rng.randint(1, 3))) for _ in range(rng.randint(1, 3)))
    return CertifiedSeries(SeriesPoly(coeffs), ConstantTail(ZERO))


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def suite_value_group(rng: random.Random, size: int, seed: int = 0) -> SuiteResult:
    """Ordering agrees with floats, interval search agrees with its scan oracle."""
    res = SuiteResult("value_group")
    for case in range(size):
        x, y = rand_scalar(rng), rand_scalar(rng)
        fx, fy = float(x), float(y)
        if abs(fx - fy) > 1e-9 and (x < y) != (fx < fy):
            res.fail(seed, case, f"order of {x} and {y} disagrees with floats")
        if parse_scalar(format_scalar(x)) != x:
            res.fail(seed, case, f"text round trip of {x}")
        lo, hi = (x, y) if x < y else (y, x)
        if lo == hi:
            res.skipped += 1
            continue
        g = Q if case % 2 else ZZ
        if g is ZZ and float(hi - lo) < 0.05:
            res.skipped += 1
            continue
        z = find_in_interval(lo, hi, g)
        if not (lo < z < hi and in_group(z, g)):
            res.fail(seed, case, f"find_in_interval({lo}, {hi}, {g.value}) = {z}")
        if g is Q and find_in_interval(lo, hi, g, method="scan") != z:
            res.fail(seed, case, f"continued fraction and scan disagree on ({lo}, {hi})")
        res.checked += 1
    return res


def suite_valuation_axioms(rng: random.Random, size: int, seed: int = 0) -> SuiteResult:
    """v(xy) = v(x) + v(y), ultrametric inequality with equality off ties, v(x) = inf iff x = 0."""
    res = SuiteResult("valuation_axioms")
    for case in range(size):
        g = Q if case % 2 else ZZ
        x, y = rand_field(rng, g), rand_field(rng, g)
        vx, vy = x.val, y.val
        if (x * y).val != vx + vy:
            res.fail(seed, case, f"val(xy) != val x + val y for {x}, {y}")
        vs = (x + y).val
        lo = vx if vx <= vy else vy
        if not vs >= lo:
            res.fail(seed, case, f"val(x+y) < min for {x}, {y}")
        if vx != vy and vs != lo:
            res.fail(seed, case, f"val(x+y) != min although val x != val y for {x}, {y}")
        for z in (x, y):
            if isinstance(z.val, Infinity) != (z == ZERO_ELEM):
                res.fail(seed, case, f"val = inf and x = 0 disagree for {z}")
        res.checked += 1
    return res


def window_population(rng: random.Random, size: int, lambdas: int = 10):
    """(f, [lam...]) pairs for the window-lemma and multiplicativity sweeps."""
    out = []
    for _ in range(size):
        g = Q if rng.random() < 0.7 else ZZ
        out.append((rand_poly(rng, g), [rand_lambda(rng) for _ in range(lambdas)]))
    return out


def suite_window(rng: random.Random, size: int, seed: int = 0, population=None) -> SuiteResult:
    """Windowed v_lambda equals the full minimization on every exact instance."""
    res = SuiteResult("window_lemma")
    pop = population if population is not None else window_population(rng, size)
    for case, (f, lams) in enumerate(pop):
        for lam in lams:
            r = v_lambda(f, lam)
            if not r.exact:
                res.skipped += 1
                continue
            val, arg = brute_force_v_lambda(f, lam)
            if r.value != val or r.argmin != arg:
                res.fail(seed, case, f"lam={format_scalar(lam)}: window {r.value}/{r.argmin} vs full {val}/{arg}")
            res.checked += 1
    return res


def suite_vlambda_mult(rng: random.Random, size: int, seed: int = 0, population=None, max_pairs: int | None = None) -> SuiteResult:
    """v_lambda(fg) = v_lambda(f) + v_lambda(g) wherever all three are exact."""
    res = SuiteResult("vlambda_multiplicative")
    pop = population if population is not None else window_population(rng, size)
    pairs = list(zip(pop[0::2], pop[1::2]))
    if max_pairs is not None:
        pairs = pairs[:max_pairs]
    for case, ((f, lams), (g, lams2)) in enumerate(pairs):
        fg = mul(f, g)
        for lam in lams + lams2:
            rf, rg, rp = v_lambda(f, lam), v_lambda(g, lam), v_lambda(fg, lam)
            if not (rf.exact and rg.exact and rp.exact):
                res.skipped += 1
                continue
            if rp.value != rf.value + rg.value:
                res.fail(seed, case, f"lam={format_scalar(lam)}: v(fg)={rp.value} != {rf.value}+{rg.value}")
            res.checked += 1
    return res


def _nonzero_poly(rng: random.Random, grp: ValueGroup) -> SeriesPoly:
    while True:
        f = SeriesPoly(rand_poly(rng, grp, 12, 0.4).coeffs, INF)
        if not f.is_zero_known():
            return f


def suite_leading_forms(rng: random.Random, size: int, seed: int = 0, ties: int = 50) -> SuiteResult:
    """graded_mul(Theta f, Theta g) = Theta(fg); the first ``ties`` cases have multi-term leading forms."""
    res = SuiteResult("leading_form_homomorphism")
    multi = 0
    for case in range(size):
        if case < ties:
            f, lam = _tie_pair(rng)
            g, _ = _tie_pair(rng)
            g = SeriesPoly(g.coeffs, INF)
        else:
            grp = Q if rng.random() < 0.7 else ZZ
            lam = rand_lambda(rng)
            f, g = _nonzero_poly(rng, grp), _nonzero_poly(rng, grp)
        lf, lg = leading_form(f, lam), leading_form(g, lam)
        if len(lf.terms) > 1 or len(lg.terms) > 1:
            multi += 1
        lhs, rhs = graded_mul(lf, lg), leading_form(mul(f, g), lam)
        if lhs != rhs:
            res.fail(seed, case, f"Theta(f)Theta(g) = {lhs} but Theta(fg) = {rhs}")
        res.checked += 1
    if multi < min(ties, size):
        res.fail(seed, -1, f"only {multi} multi-term leading forms generated")
    return res


WITNESS_CFG = IncoherenceConfig(Q, SQRT2 - 1, monomial(ONE))


def suite_chi(rng: random.Random, size: int, seed: int = 0) -> SuiteResult:
    """chi of the witness on lam_k = 2^-k: nonincreasing, above alpha, and the continuity recipe works."""
    res = SuiteResult("chi_continuity")
    f = build_witness_series(WITNESS_CFG)
    alpha = WITNESS_CFG.alpha
    grid = geometric_grid(ONE, max(size, 12))
    rows = chi_table(f, grid)
    prev = None
    for k, r in enumerate(rows, 1):
        if not r.exact:
            res.fail(seed, k, f"chi(2^-{k}) not exact")
        if not r.value > alpha:
            res.fail(seed, k, f"chi(2^-{k}) = {r.value} <= alpha")
        if prev is not None and r.value > prev:
            res.fail(seed, k, f"chi increased at k={k}")
        prev = r.value
        res.checked += 1
    for case, eps in enumerate((Fraction(1, 4), Fraction(1, 16), Fraction(1, 64), Fraction(1, 256))):
        lam, _ = continuity_lambda(f, GroupScalar(eps))
        r = v_lambda(f, lam)
        if not (r.exact and r.value - alpha < eps):
            res.fail(seed, case, f"eps={eps}: chi({lam}) - alpha = {r.value - alpha}")
        res.checked += 1
    return res


def certified_pairs(rng: random.Random, count: int) -> list[tuple[CertifiedSeries, CertifiedSeries]]:
    """Pairs in each shape that admits a product certificate."""
    out = []
    for i in range(count):
        grp = Q if i % 2 == 0 else ZZ
        shape = i % 4
        if shape == 0:  # polynomials
            f = CertifiedSeries(SeriesPoly(tuple(rand_R(rng, grp, 0.2) for _ in range(rng.randint(1, 5))) or (ONE_ELEM,)), ZeroTail())
            g = CertifiedSeries(SeriesPoly(tuple(rand_R(rng, grp, 0.2) for _ in range(rng.randint(1, 5)))), ZeroTail())
            if v_zero(f) is INF or v_zero(g) is INF:
                f = CertifiedSeries(SeriesPoly((monomial(rand_exponent(rng, grp)),)), ZeroTail())
        elif shape == 1:  # single term times anything
            f = CertifiedSeries(SeriesPoly((ZERO_ELEM,) * rng.randint(0, 2) + (monomial(rand_exponent(rng, grp), rand_rat(rng)),)), ZeroTail())
            g = rand_certified(rng, grp)
        else:  # positive times positive
            f = positive_sequence_series(rng, grp, rand_outside(rng, grp), rng.randint(1, 4))
            if shape == 2:
                g = positive_sequence_series(rng, grp, rand_outside(rng, grp), rng.randint(1, 4))
            else:
                g = CertifiedSeries(SeriesPoly((monomial(rand_exponent(rng, grp, 1) + 1),)), ConstantTail(rand_exponent(rng, grp, 1)))
        out.append((f, g))
    return out


def uncertified_pairs(rng: random.Random, count: int) -> list[tuple[CertifiedSeries, CertifiedSeries]]:
    """Pairs with mixed signs and sequence tails: no product certificate applies."""
    out = []
    while len(out) < count:
        grp = Q if len(out) % 2 == 0 else ZZ
        pair = []
        for _ in range(2):
            lim = rand_outside(rng, grp)
            coeffs = [monomial(e, -rand_rat(rng) if j % 2 else rand_rat(rng))
                      for j, e in enumerate(decreasing_sequence(lim, grp, 2))]
            coeffs = [monomial(rand_exponent(rng, grp) + lim, -1)] + coeffs
            pair.append(CertifiedSeries(SeriesPoly(tuple(coeffs)), SequenceTail(lim, grp)))
        try:
            mul_certified(*pair)
        except CertificateError:
            out.append(tuple(pair))
    return out


def suite_v0_mult(rng: random.Random, size: int = 20, seed: int = 0, grid_steps: int = 8, order: int = 64) -> SuiteResult:
    """v_0(fg) = v_0 f + v_0 g: exactly from assembled certificates, else bracketed on a lam-grid.

    Without a certificate, chi_fg(lam) is an upper bound for v_0(fg) and
    chi_fg(lam) - gap_f(lam) - gap_g(lam) a lower bound, where gap_h(lam) =
    chi_h(lam) - v_0(h).  Both must bracket v_0 f + v_0 g at every exact grid
    point, and the bracket width must shrink as lam decreases.
    """
    res = SuiteResult("v0_multiplicative")
    for case, (f, g) in enumerate(certified_pairs(rng, size)):
        fg = mul_certified(f, g)
        if v_zero(fg) != v_zero(f) + v_zero(g):
            res.fail(seed, case, f"v0(fg)={v_zero(fg)} != {v_zero(f)}+{v_zero(g)}")
        n = max(fg.start, 12)
        if not fg.truncate(n).same_prefix(mul(f.truncate(n), g.truncate(n)), n):
            res.fail(seed, case, "certified product disagrees with the Cauchy product")
        if not check_certificate(fg, n + 8):
            res.fail(seed, case, "product certificate not realized by its coefficients")
        res.checked += 1
    grid = geometric_grid(ONE, grid_steps)
    for case, (f, g) in enumerate(uncertified_pairs(rng, size), size):
        target = v_zero(f) + v_zero(g)
        prod = mul(f.truncate(order), g.truncate(order))
        widths = []
        for lam in grid:
            rp, rf, rg = v_lambda(prod, lam), v_lambda(f, lam), v_lambda(g, lam)
            if not (rp.exact and rf.exact and rg.exact):
                continue
            gap = (rf.value - v_zero(f)) + (rg.value - v_zero(g))
            upper, lower = rp.value, rp.value - gap
            if not (lower <= target <= upper):
                res.fail(seed, case, f"lam={format_scalar(lam)}: [{lower}, {upper}] misses {target}")
            widths.append(gap)
        if len(widths) < 3:
            res.fail(seed, case, "fewer than three exact grid points")
        elif any(b > a for a, b in zip(widths, widths[1:])):
            res.fail(seed, case, "bracket width grew as lam decreased")
        res.checked += 1
    return res


def suite_refuter(
    rng: random.Random, size: int = 100, seed: int = 0, brute_trials: int = 20, order: int = 32
) -> SuiteResult:
    """refute_generators succeeds, verify_report replays, every single-field tamper is caught."""
    res = SuiteResult("refuter_soundness")
    cfgs = [
        WITNESS_CFG,
        IncoherenceConfig(ZZ, GroupScalar(Fraction(1, 2)), monomial(ONE)),
        IncoherenceConfig(Q, GroupScalar(Fraction(1, 3), Fraction(1, 2)), monomial(GroupScalar(2))),
    ]
    for case in range(size):
        cfg = cfgs[case % len(cfgs)]
        m = 1 + case % 8
        cands = random_candidates(cfg, rng, m)
        rep = refute_generators(cands, cfg)
        text = rep.to_text()
        if not verify_report(text, cfg):
            res.fail(seed, case, f"fresh report rejected: {verify_report(text, cfg).failures}")
        # unsealed edit: the digest alone catches it
        lines = text.splitlines()
        edited = "\n".join(lines[:2] + [lines[2] + " "] + lines[3:]) + "\n"
        if verify_report(edited, cfg).ok:
            res.fail(seed, case, "unsealed edit accepted")
        for key, variant in tamper_variants(text):
            if verify_report(variant, cfg).ok:
                res.fail(seed, case, f"tampered field {key} accepted")
        if brute_force_generates(rep, rng, trials=brute_trials, order=order):
            res.fail(seed, case, "bounded cofactors reproduced t")
        res.checked += 1
    return res


def suite_intersection(rng: random.Random, size: int, seed: int = 0) -> SuiteResult:
    """in_critical_ideal(g) agrees with whether g*f lands in R[[X]]r."""
    res = SuiteResult("intersection")
    cfg = WITNESS_CFG
    f = build_witness_series(cfg)
    ideal = critical_ideal(cfg)
    for case in range(size):
        if case % 2:
            g = random_candidates(cfg, rng, 1)[0]
        else:
            g = rand_certified(rng, Q)
        member = in_critical_ideal(g, ideal)
        order = 16
        while True:
            try:
                out = intersection_membership(g, cfg, f, order)
                break
            except InconclusiveError:
                if order >= 256:
                    out = None
                    break
                order *= 2
        if out is None:
            res.skipped += 1
            continue
        if out.member != member:
            res.fail(seed, case, f"membership {member} but intersection says {out.member}")
        res.checked += 1
    return res


def purity_triple(rng: random.Random, order: int):
    grp = Q if rng.random() < 0.7 else ZZ
    a = rand_R(rng, grp, 0.0)
    h = SeriesPoly(tuple(rand_R(rng, grp, 0.5) for _ in range(order)))
    u = rand_unit(rng, grp)
    f = scale(h, a)
    g = mul(h, u.truncate(order))
    return a, f, g, u, h


def suite_purity(rng: random.Random, size: int, seed: int = 0, order: int = 32) -> SuiteResult:
    """pure_divide recovers h with a*h = f; broken witnesses are always rejected."""
    res = SuiteResult("purity")
    for case in range(size):
        a, f, g, u, h = purity_triple(rng, order)
        try:
            out = pure_divide(a, f, g, u, order)
        except PurityError as exc:
            res.fail(seed, case, f"consistent witness rejected: {exc}")
            continue
        if not scale(out, a).same_prefix(f, order) or not out.same_prefix(h, order):
            res.fail(seed, case, "a*h != f")
        # fabricated: perturb one coefficient of g, or raise v(a) above v_0(f)
        k = rng.randrange(order)
        if case % 2:
            bump = monomial(rand_exponent(rng, Q, 1), 1)
            bad_g = SeriesPoly(g.coeffs[:k] + (g.coeffs[k] + bump,) + g.coeffs[k + 1:], g.tail_floor)
            bad = (a, f, bad_g, u)
        else:
            bad = (a * monomial(GroupScalar(3)), f, g, u)
        try:
            pure_divide(*bad, order)
            res.fail(seed, case, "fabricated witness accepted")
        except PurityError:
            pass
        res.checked += 1
    return res


def _rand_fraction(rng: random.Random, grp: ValueGroup, positive_num: bool = False) -> LocalFraction:
    if positive_num or rng.random() < 0.3:
        num = positive_sequence_series(rng, grp, rand_outside(rng, grp), rng.randint(1, 4))
    else:
        num = rand_certified(rng, grp)
        # inverting needs num*g certified when v_0(num) is outside the group
        while isinstance(v_zero(num), Infinity) or not (in_group(v_zero(num), grp) or num.positive):
            num = rand_certified(rng, grp)
    den_r = monomial(rand_exponent(rng, grp), Fraction(rng.randint(1, 5), rng.randint(1, 3)))
    kind = rng.randrange(2)
    if kind == 0:
        den_u = CertifiedSeries(SeriesPoly((ONE_ELEM,)), ZeroTail())
    else:
        den_u = CertifiedSeries(
            SeriesPoly(tuple(monomial(ZERO, Fraction(rng.randint(1, 4))) for _ in range(rng.randint(1, 3)))),
            ConstantTail(ZERO),
        )
    return LocalFraction(num, den_r, den_u)


def suite_localization(rng: random.Random, size: int, seed: int = 0, order: int = 12) -> SuiteResult:
    """Equal fractions get equal values; val x >= 0 or val x^-1 >= 0, with x then moved into T."""
    res = SuiteResult("localization")
    for case in range(size):
        grp = Q if case % 2 else ZZ
        x = _rand_fraction(rng, grp)
        # an equal fraction: multiply num and den by s in R and w in U
        s = monomial(rand_exponent(rng, grp), Fraction(rng.randint(1, 4)))
        w = CertifiedSeries(SeriesPoly((monomial(ZERO, Fraction(rng.randint(1, 4))),)), ZeroTail())
        num2 = scale_certified(mul_certified(x.num, w), s)
        y = LocalFraction(num2, x.den_r * s, mul_certified(x.den_u, w))
        if not fractions_equal(x, y, order):
            res.fail(seed, case, "constructed fractions not cross-multiplication equal")
        if val_fraction(x) != val_fraction(y):
            res.fail(seed, case, f"equal fractions with values {val_fraction(x)} and {val_fraction(y)}")
        # trichotomy
        xi = invert(x, grp)
        vx, vi = val_fraction(x), val_fraction(xi)
        if not (vx >= ZERO or vi >= ZERO):
            res.fail(seed, case, f"neither x nor 1/x in T: {vx}, {vi}")
        if vx + vi != ZERO:
            res.fail(seed, case, f"val x + val 1/x = {vx + vi}")
        if vx >= ZERO:
            t_form = move_into_T(x)
            if not (t_form.den_r == ONE_ELEM and fractions_equal(x, t_form, order)):
                res.fail(seed, case, "move_into_T changed the element")
        res.checked += 1
    return res


SUITES: dict[str, tuple[Callable[..., SuiteResult], int]] = {
    "value_group": (suite_value_group, 300),
    "valuation_axioms": (suite_valuation_axioms, 2000),
    "window_lemma": (suite_window, 200),
    "vlambda_multiplicative": (suite_vlambda_mult, 100),
    "leading_form_homomorphism": (suite_leading_forms, 200),
    "chi_continuity": (suite_chi, 12),
    "v0_multiplicative": (suite_v0_mult, 20),
    "refuter_soundness": (suite_refuter, 30),
    "intersection": (suite_intersection, 200),
    "purity": (suite_purity, 200),
    "localization": (suite_localization, 200),
}


def run_suites(seed: int, names: list[str] | None = None, scale_factor: float = 1.0) -> list[SuiteResult]:
    """Run the named suites (all by default), each with its own stream derived from ``seed``."""
    out = []
    for name in names or list(SUITES):
        fn, size = SUITES[name]
        rng = random.Random(f"{seed}:{name}")
        t0 = time.perf_counter()
        try:
            res = fn(rng, max(1, int(size * scale_factor)), seed=seed)
        except Exception as exc:  # a crash is a failure with a replay line
            res = SuiteResult(name)
            res.fail(seed, -1, f"{type(exc).__name__}: {exc}")
        res.seconds = time.perf_counter() - t0
        out.append(res)
    return out
