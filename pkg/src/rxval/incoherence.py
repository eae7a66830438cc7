"""R[[X]] is not coherent: the witness series, the critical ideal and a refuter.

Fix alpha outside the value group and r in R with v(r) > alpha.  The witness
f has coefficients t^(alpha_n) with alpha_n decreasing to alpha.  Then
R[[X]]f meets R[[X]]r in I*f, where I = {g : v_0(g) >= v(r) - alpha}.  The
threshold v(r) - alpha is not in the group, so no finite set of elements of I
generates it: the constant terms of any R[[X]]-combination have valuation at
least beta = min v(constant terms) > threshold, while some monomial t with
threshold < v(t) < beta already lies in I.

A :class:`WitnessReport` records that argument for one candidate set and is
re-checked by :func:`verify_report` from the stored text alone.
"""
from __future__ import annotations

import functools
import hashlib
import random
from dataclasses import dataclass, field
from fractions import Fraction

from rxval.base_field import (
    ZERO_ELEM,
    FieldElem,
    divide_in_R,
    format_field,
    in_R,
    monomial,
    parse_field,
)
from rxval.power_series import (
    CertifiedSeries,
    ConstantTail,
    SeriesPoly,
    SequenceTail,
    ZeroTail,
    mul,
    parse_coeff_list,
    scale,
    v_zero,
)
from rxval.value_group import (
    INF,
    ONE,
    SQRT2,
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
    parse_ext,
    parse_scalar,
)

__all__ = [
    "IncoherenceConfig",
    "CriticalIdeal",
    "IntersectionResult",
    "InconclusiveError",
    "NotInIdealError",
    "WitnessReport",
    "VerifyResult",
    "DEFAULT_CONFIG",
    "build_witness_series",
    "critical_ideal",
    "in_critical_ideal",
    "intersection_membership",
    "refute_generators",
    "verify_report",
    "random_candidates",
    "tamper_variants",
    "brute_force_generates",
]


class InconclusiveError(RuntimeError):
    """Neither a cofactor nor a low coefficient is visible below the order; increase N."""


class NotInIdealError(ValueError):
    """A candidate generator is not an element of the critical ideal."""


@dataclass(frozen=True)
class IncoherenceConfig:
    group: ValueGroup
    alpha: GroupScalar
    r: FieldElem
    seq_len: int = 8
    order: int = 32

    def __post_init__(self) -> None:
        if self.alpha < ZERO:
            raise ValueError("alpha must be >= 0")
        if in_group(self.alpha, self.group):
            raise NotInGroupError(
                f"alpha = {format_scalar(self.alpha)} lies in {self.group.value}; the construction needs alpha outside it"
            )
        if self.r.is_zero() or not in_R(self.r):
            raise ValueError("r must be a nonzero element of R")
        if not in_group(self.r.val, self.group):
            raise NotInGroupError(f"val(r) = {format_scalar(self.r.val)} is not in {self.group.value}")
        if not self.r.val > self.alpha:
            raise ValueError("need val(r) > alpha")
        if self.seq_len < 1 or self.order < 1:
            raise ValueError("seq_len and order must be positive")


DEFAULT_CONFIG = IncoherenceConfig(ValueGroup.RATIONALS, SQRT2 - 1, monomial(ONE))


@dataclass(frozen=True)
class CriticalIdeal:
    threshold: GroupScalar
    group: ValueGroup

    def __post_init__(self) -> None:
        if in_group(self.threshold, self.group):
            raise AssertionError("threshold in the value group")
        if not self.threshold > ZERO:
            raise AssertionError("threshold must be positive")


def critical_ideal(cfg: IncoherenceConfig) -> CriticalIdeal:
    return CriticalIdeal(cfg.r.val - cfg.alpha, cfg.group)


def build_witness_series(cfg: IncoherenceConfig) -> CertifiedSeries:
    """f = sum t^(alpha_{n+1}) X^n with the tail rule carrying the infimum alpha."""
    exps = decreasing_sequence(cfg.alpha, cfg.group, cfg.seq_len)
    return CertifiedSeries(SeriesPoly(tuple(monomial(e) for e in exps)), SequenceTail(cfg.alpha, cfg.group))


def in_critical_ideal(g: CertifiedSeries, ideal: CriticalIdeal) -> bool:
    return v_zero(g) >= ideal.threshold


@dataclass(frozen=True)
class IntersectionResult:
    """``cofactor`` y with g*f = r*y, or the index of a coefficient of g*f below v(r)."""

    member: bool
    cofactor: SeriesPoly | None = None
    witness_index: int | None = None
    witness_val: ExtScalar | None = None


def intersection_membership(
    g: CertifiedSeries, cfg: IncoherenceConfig, f: CertifiedSeries | None = None, order: int | None = None
) -> IntersectionResult:
    """Decide whether g*f lies in R[[X]]r, with a witness either way."""
    f = build_witness_series(cfg) if f is None else f
    n = cfg.order if order is None else order
    gf = mul(g.truncate(n), f.truncate(n))
    vr = cfg.r.val
    if in_critical_ideal(g, critical_ideal(cfg)):
        y = SeriesPoly(tuple(divide_in_R(cfg.r, c) for c in gf.coeffs), _shift_floor(gf.tail_floor, vr))
        if not scale(y, cfg.r).same_prefix(gf, n):
            raise AssertionError("r*y != g*f")
        return IntersectionResult(True, cofactor=y)
    for k, c in enumerate(gf.coeffs):
        if c.val < vr:
            return IntersectionResult(False, witness_index=k, witness_val=c.val)
    raise InconclusiveError(f"no coefficient of g*f below v(r) within order {n}; increase N")


def _shift_floor(floor: ExtScalar, by: GroupScalar) -> ExtScalar:
    if isinstance(floor, Infinity):
        return floor
    out = floor - by
    return out if out >= ZERO else ZERO


# ---------------------------------------------------------------------------
# the refuter
# ---------------------------------------------------------------------------

def _x0_val(g: CertifiedSeries) -> ExtScalar:
    return g.coeff(0).val


def refute_generators(cands: list[CertifiedSeries], cfg: IncoherenceConfig) -> "WitnessReport":
    """A monomial t in I that no R[[X]]-combination of ``cands`` can produce."""
    ideal = critical_ideal(cfg)
    if not cands:
        raise ValueError("need at least one candidate")
    for i, g in enumerate(cands, 1):
        if not in_critical_ideal(g, ideal):
            raise NotInIdealError(
                f"candidate {i} has v_0 = {format_ext(v_zero(g))} < threshold {format_scalar(ideal.threshold)}"
            )
    beta = min((_x0_val(g) for g in cands), key=_ext_key)
    hi = ideal.threshold + 1
    if not isinstance(beta, Infinity) and beta < hi:
        hi = beta
    gamma = find_in_interval(ideal.threshold, hi, cfg.group)
    return WitnessReport(
        group=cfg.group,
        alpha=cfg.alpha,
        r=cfg.r,
        threshold=ideal.threshold,
        candidates=tuple(cands),
        beta=beta,
        t=monomial(gamma),
        gamma=gamma,
    )


def _ext_key(x: ExtScalar):
    return (1, 0) if isinstance(x, Infinity) else (0, x)


# ---------------------------------------------------------------------------
# report text form
# ---------------------------------------------------------------------------

HEADER = "# rxval witness report v1"


def _cand_fields(i: int, g: CertifiedSeries) -> list[tuple[str, str]]:
    p = f"candidate.{i}"
    out = [(f"{p}.coeffs", "; ".join(format_field(c) for c in g.prefix.coeffs)), (f"{p}.tail", g.tail.name)]
    if isinstance(g.tail, ConstantTail):
        out.append((f"{p}.tail.level", format_scalar(g.tail.level)))
    elif isinstance(g.tail, SequenceTail):
        out.append((f"{p}.tail.limit", format_scalar(g.tail.limit)))
    elif not isinstance(g.tail, ZeroTail):
        raise ValueError(f"tail rule {g.tail.name!r} cannot be written into a report")
    out.append((f"{p}.v0", format_ext(v_zero(g))))
    out.append((f"{p}.x0_val", format_ext(_x0_val(g))))
    return out


def candidate_from_fields(fields: dict[str, str], i: int, group: ValueGroup) -> CertifiedSeries:
    p = f"candidate.{i}"
    coeffs = parse_coeff_list(fields[f"{p}.coeffs"])
    kind = fields[f"{p}.tail"]
    if kind == "zero":
        tail = ZeroTail()
    elif kind == "constant":
        tail = ConstantTail(parse_scalar(fields[f"{p}.tail.level"]))
    elif kind == "sequence":
        tail = SequenceTail(parse_scalar(fields[f"{p}.tail.limit"]), group)
    else:
        raise ValueError(f"unknown tail rule {kind!r}")
    return CertifiedSeries(SeriesPoly(coeffs), tail)


@dataclass(frozen=True, eq=False)
class WitnessReport:
    group: ValueGroup
    alpha: GroupScalar
    r: FieldElem
    threshold: GroupScalar
    candidates: tuple[CertifiedSeries, ...]
    beta: ExtScalar
    t: FieldElem
    gamma: GroupScalar

    def fields(self) -> list[tuple[str, str]]:
        """Ordered key/value pairs, including the check trail."""
        out = [
            ("group", self.group.value),
            ("alpha", format_scalar(self.alpha)),
            ("r", format_field(self.r)),
            ("val_r", format_ext(self.r.val)),
            ("threshold", format_scalar(self.threshold)),
            ("m", str(len(self.candidates))),
        ]
        for i, g in enumerate(self.candidates, 1):
            out += _cand_fields(i, g)
        out += [
            ("beta", format_ext(self.beta)),
            ("t", format_field(self.t)),
            ("gamma", format_scalar(self.gamma)),
        ]
        out += [(f"check.{name}", "pass" if ok else "fail") for name, ok in _claims(self)]
        return out

    def to_text(self) -> str:
        body = [f"{k}: {v}" for k, v in self.fields()]
        digest = hashlib.sha256("\n".join(body).encode()).hexdigest()
        return "\n".join([HEADER, *body, f"digest: {digest}"]) + "\n"


def _claims(rep: WitnessReport) -> list[tuple[str, bool]]:
    """The inequalities the refutation rests on, each a single exact comparison."""
    out = [("threshold_not_in_group", not in_group(rep.threshold, rep.group))]
    for i, g in enumerate(rep.candidates, 1):
        out.append((f"candidate.{i}.in_I", v_zero(g) >= rep.threshold))
    out.append(("beta_gt_threshold", rep.beta > rep.threshold))
    out.append(("gamma_in_group", in_group(rep.gamma, rep.group)))
    out.append(("t_in_I", rep.gamma > rep.threshold))
    out.append(("gamma_lt_beta", rep.gamma < rep.beta))
    return out


def parse_report_fields(text: str) -> dict[str, str]:
    fields: dict[str, str] = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        key, sep, value = line.partition(": ")
        if not sep:
            key, value = line.rstrip(":"), ""
        if key in fields:
            raise ValueError(f"duplicate key {key!r}")
        fields[key] = value.strip()
    return fields


def report_from_text(text: str) -> WitnessReport:
    f = parse_report_fields(text)
    group = ValueGroup(f["group"])
    m = int(f["m"])
    cands = tuple(candidate_from_fields(f, i, group) for i in range(1, m + 1))
    return WitnessReport(
        group=group,
        alpha=parse_scalar(f["alpha"]),
        r=parse_field(f["r"]),
        threshold=parse_scalar(f["threshold"]),
        candidates=cands,
        beta=parse_ext(f["beta"]),
        t=parse_field(f["t"]),
        gamma=parse_scalar(f["gamma"]),
    )


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass
class VerifyResult:
    ok: bool
    failures: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def verify_report(rep: WitnessReport | str, cfg: IncoherenceConfig | None = None) -> VerifyResult:
    """Replay every claim of a report; ``failures`` names each step that does not replay.

    A text report is checked line by line against the values recomputed from
    its own inputs (candidates, alpha, r), so no stored conclusion is trusted.
    """
    failures: list[str] = []
    text = rep if isinstance(rep, str) else rep.to_text()
    try:
        fields = parse_report_fields(text)
        body = [line for line in text.splitlines() if line and not line.startswith("#") and not line.startswith("digest:")]
        digest = hashlib.sha256("\n".join(body).encode()).hexdigest()
        if fields.get("digest") != digest:
            failures.append("digest")
        parsed = report_from_text(text)
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        return VerifyResult(False, failures + [f"parse: {exc}"])

    try:
        IncoherenceConfig(parsed.group, parsed.alpha, parsed.r)
    except ValueError as exc:
        failures.append(f"config: {exc}")
    if cfg is not None and (
        cfg.group is not parsed.group or cfg.alpha != parsed.alpha or cfg.r != parsed.r
    ):
        failures.append("config: report does not match the given configuration")
    if parsed.threshold != parsed.r.val - parsed.alpha:
        failures.append("threshold: stored value != val(r) - alpha")
    if not parsed.candidates:
        failures.append("m: no candidates")
    beta = min((_x0_val(g) for g in parsed.candidates), key=_ext_key) if parsed.candidates else INF
    if beta != parsed.beta:
        failures.append("beta: stored value != min val of constant terms")
    if parsed.t.val != parsed.gamma:
        failures.append("gamma: stored value != val(t)")
    for name, ok in _claims(parsed):
        if not ok:
            failures.append(f"{name}: inequality fails")

    # every stored line must equal its recomputation
    expected = dict(parsed.fields())
    for key, value in fields.items():
        if key == "digest":
            continue
        if key not in expected:
            failures.append(f"{key}: unexpected field")
        elif expected[key] != value:
            failures.append(f"{key}: stored value does not replay")
    for key in expected:
        if key not in fields:
            failures.append(f"{key}: missing")
    return VerifyResult(not failures, failures)


# ---------------------------------------------------------------------------
# seeded candidates, tampering, brute force
# ---------------------------------------------------------------------------

def _seeded_exponent(rng: random.Random, lo: GroupScalar, width: GroupScalar, group: ValueGroup) -> GroupScalar:
    """A group element in a random subinterval of (lo, lo + width)."""
    k = rng.randrange(16)
    a = lo + width * Fraction(k, 16)
    return find_in_interval(a, a + width * Fraction(1, 16), group)


def _outside(x: GroupScalar, group: ValueGroup, deltas=(Fraction(1, 4), Fraction(1, 3), Fraction(1, 5))) -> GroupScalar:
    for d in deltas:
        if not in_group(x + d, group):
            return x + d
    raise AssertionError("no offset leaves the group")


def random_candidates(cfg: IncoherenceConfig, rng: random.Random, m: int) -> list[CertifiedSeries]:
    """m certified elements of I with seeded exponents, mixing tail shapes.

    Exponents sit in (threshold, threshold + 1); some candidates have a zero
    constant term and some a sequence tail whose unattained infimum is the
    threshold itself.
    """
    th = critical_ideal(cfg).threshold
    out = []
    for _ in range(m):
        length = rng.randint(1, 4)
        coeffs = []
        for n in range(length):
            if n == 0 and rng.random() < 0.2:
                coeffs.append(ZERO_ELEM)
                continue
            gamma = _seeded_exponent(rng, th, ONE, cfg.group)
            coeffs.append(monomial(gamma, Fraction(rng.choice([1, -1, 2, 3, -5]), rng.choice([1, 2, 7]))))
        kind = rng.choice(["zero", "constant", "sequence", "edge"])
        if kind == "zero":
            tail = ZeroTail()
        elif kind == "constant":
            tail = ConstantTail(_seeded_exponent(rng, th, ONE, cfg.group))
        elif kind == "sequence":
            tail = SequenceTail(_outside(th, cfg.group), cfg.group)
        else:
            tail = SequenceTail(th, cfg.group)
        out.append(CertifiedSeries(SeriesPoly(tuple(coeffs)), tail))
    return out


def _bump(value: str) -> str:
    x = parse_ext(value)
    return "0" if isinstance(x, Infinity) else format_scalar(x + 1)


def tamper_variants(text: str) -> list[tuple[str, str]]:
    """One altered copy of the report per field, with the digest resealed.

    Resealing means only the semantic replay can catch the change.
    """
    lines = [line for line in text.splitlines() if line and not line.startswith("#")]
    keys = [line.partition(": ")[0] for line in lines if not line.startswith("digest:")]
    fields = parse_report_fields(text)
    out = []
    for key in keys:
        value = fields[key]
        if key == "group":
            new = ValueGroup.Z_PLUS_Z_SQRT2.value if value == ValueGroup.RATIONALS.value else ValueGroup.RATIONALS.value
        elif key in ("r", "t"):
            new = format_field(parse_field(value) * monomial(ONE))
        elif key == "m":
            new = str(int(value) + 1)
        elif key.endswith(".coeffs"):
            new = "(1*t^(0 + 0*sqrt2))/(1)"
        elif key.endswith(".tail"):
            new = "bogus"
        elif key.endswith((".level", ".limit")):
            new = format_scalar(parse_scalar(value) - 1)
        elif key.startswith("check."):
            new = "fail" if value == "pass" else "pass"
        else:
            new = _bump(value)
        altered = dict(fields)
        altered[key] = new
        body = [f"{k}: {altered[k]}" for k in keys]
        digest = hashlib.sha256("\n".join(body).encode()).hexdigest()
        out.append((key, "\n".join([HEADER, *body, f"digest: {digest}"]) + "\n"))
    return out


@functools.lru_cache(maxsize=None)
def _exponent_pool(group: ValueGroup, size: int = 24) -> list[GroupScalar]:
    """Group elements spread over (0, 2), plus 0."""
    two = GroupScalar(2)
    return (ZERO,) + tuple(find_in_interval(two * Fraction(k, size), two * Fraction(k + 1, size), group) for k in range(size))


def _random_R(rng: random.Random, pool: list[GroupScalar]) -> FieldElem:
    if rng.random() < 0.25:
        return ZERO_ELEM
    return monomial(rng.choice(pool), Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 5)))


def brute_force_generates(
    rep: WitnessReport, rng: random.Random, trials: int = 200, order: int = 32
) -> bool:
    """Search bounded cofactors h_i for sum h_i g_i == t at the given order.

    Besides random h_i in R[[X]] it tries, for each i, the only constant
    cofactor that could hit t exactly: t / g_i(0), if that lies in R.
    """
    cands = [g.truncate(order) for g in rep.candidates]
    target0 = rep.t

    def hits(hs: list[SeriesPoly]) -> bool:
        c0 = ZERO_ELEM
        for h, g in zip(hs, cands):
            c0 = c0 + h.coeffs[0] * g.coeffs[0]
        if c0 != target0:
            return False
        total = mul(hs[0], cands[0])
        for h, g in zip(hs[1:], cands[1:]):
            total = total + mul(h, g)
        return all(c.is_zero() for c in total.coeffs[1:order])

    for g in cands:
        c = g.coeffs[0]
        if not c.is_zero() and (target0 / c).val >= ZERO:
            hs = [SeriesPoly((ZERO_ELEM,) * order) for _ in cands]
            hs[cands.index(g)] = SeriesPoly((target0 / c,) + (ZERO_ELEM,) * (order - 1))
            if hits(hs):
                return True
    pool = list(_exponent_pool(rep.group))
    for _ in range(trials):
        hs = [SeriesPoly(tuple(_random_R(rng, pool) for _ in range(order))) for _ in cands]
        if hits(hs):
            return True
    return False
