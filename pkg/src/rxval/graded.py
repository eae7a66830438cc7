"""Leading forms: the homogeneous image of a series in (gr R)[Y].

In this model the degree-gamma piece of gr R is one-dimensional over Q,
spanned by the class of t^gamma, so a graded coefficient is a pair
(gamma, leading rational).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from rxval.power_series import SeriesPoly, v_lambda
from rxval.value_group import ZERO, GroupScalar, Infinity, format_scalar

__all__ = ["GradedTerm", "GradedPoly", "InexactError", "leading_form", "graded_mul", "graded_one"]


class InexactError(ValueError):
    """The truncation does not determine the requested quantity."""


@dataclass(frozen=True)
class GradedTerm:
    gamma: GroupScalar
    coeff: Fraction

    def __post_init__(self) -> None:
        if self.coeff == 0:
            raise ValueError("graded term with zero coefficient")


@dataclass(frozen=True)
class GradedPoly:
    degree: GroupScalar
    lam: GroupScalar
    terms: tuple[tuple[int, GradedTerm], ...]  # sorted by power of Y

    def __post_init__(self) -> None:
        for n, term in self.terms:
            if term.gamma + self.lam * n != self.degree:
                raise ValueError(f"term Y^{n} does not have degree {format_scalar(self.degree)}")

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(n for n, _ in self.terms)

    def __str__(self) -> str:
        body = " + ".join(f"{t.coeff}*t^({format_scalar(t.gamma)})*Y^{n}" for n, t in self.terms)
        return f"{body} [deg={format_scalar(self.degree)}, lam={format_scalar(self.lam)}]"


def leading_form(f: SeriesPoly, lam: GroupScalar) -> GradedPoly:
    """Theta_lam of the class of f in its top filtration degree."""
    res = v_lambda(f, lam)
    if isinstance(res.value, Infinity):
        raise ValueError("zero series has no leading form")
    if not res.exact:
        raise InexactError(f"v_lambda at lam={format_scalar(lam)} is not determined by the truncation")
    terms = tuple((n, GradedTerm(f.coeffs[n].val, f.coeffs[n].leading_coeff())) for n in res.argmin)
    return GradedPoly(res.value, lam, terms)


def graded_one(lam: GroupScalar) -> GradedPoly:
    return GradedPoly(ZERO, lam, ((0, GradedTerm(ZERO, Fraction(1))),))


def graded_mul(a: GradedPoly, b: GradedPoly) -> GradedPoly:
    """Product in (gr R)[Y]: exponents of t add, rationals multiply."""
    if a.lam != b.lam:
        raise ValueError("leading forms taken at different slopes")
    acc: dict[int, tuple[GroupScalar, Fraction]] = {}
    for i, s in a.terms:
        for j, t in b.terms:
            gamma = s.gamma + t.gamma
            prev = acc.get(i + j)
            acc[i + j] = (gamma, (prev[1] if prev else 0) + s.coeff * t.coeff)
    terms = tuple(sorted((n, GradedTerm(g, c)) for n, (g, c) in acc.items() if c != 0))
    return GradedPoly(a.degree + b.degree, a.lam, terms)
