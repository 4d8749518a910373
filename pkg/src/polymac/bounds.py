"""Closed-form upper bounds on the forgery advantage.

Four formulas, identified by the tokens used in reports and CSV columns:
uniform_eq2 for exactly uniform keys, general_eq9 for keys at statistical
distances (delta1, delta2) from uniform, simplified_eq10 for the expanded
product form valid under explicit side conditions, and mu_comment for the
same bound reparameterized by mu_i = delta_i * p.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .distributions import (
    DistanceValue,
    RationalLike,
    as_distance,
    exact_fraction,
    max_top_mass,
)
from .field import is_prime

FORMULA_UNIFORM = "uniform_eq2"
FORMULA_GENERAL = "general_eq9"
FORMULA_SIMPLIFIED = "simplified_eq10"
FORMULA_MU = "mu_comment"


@dataclass(frozen=True)
class AdvantageBound:
    """A bound value with its formula token and applicability status.

    raw may exceed 1 (the bound is then vacuous but still true); effective
    clamps it to 1. A bound may be flagged inapplicable, with the violated
    condition named, or carry an informational note while staying applicable.
    """

    raw: Fraction
    formula: str
    applicable: bool = True
    reason: str = ""

    def __post_init__(self) -> None:
        if self.raw < 0:
            raise ValueError(f"bound must be non-negative, got {self.raw}")
        if not self.applicable and not self.reason:
            raise ValueError("inapplicable bounds must name the violated condition")

    @property
    def effective(self) -> Fraction:
        return min(self.raw, Fraction(1))

    @property
    def vacuous(self) -> bool:
        return self.raw >= 1


def _check_scheme(p: int, l: int) -> None:
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")


def bound_uniform(p: int, l: int) -> AdvantageBound:
    """Advantage bound for exactly uniform keys: (l+1)/p."""
    _check_scheme(p, l)
    return AdvantageBound(Fraction(l + 1, p), FORMULA_UNIFORM)


def bound_general(
    p: int,
    l: int,
    delta1: DistanceValue | RationalLike,
    delta2: DistanceValue | RationalLike,
) -> AdvantageBound:
    """General bound for skewed keys: p times the product of the largest
    mass l+1 outcomes can carry at distance delta1 and the largest single
    outcome mass at distance delta2.

    When l+1 >= p the first factor covers the whole support and is 1; the
    bound stays valid (and vacuous), with a note recorded.
    """
    _check_scheme(p, l)
    d1 = as_distance(delta1, p)
    d2 = as_distance(delta2, p)
    note = ""
    if l + 1 < p:
        factor1 = max_top_mass(p, l + 1, d1)
    else:
        factor1 = Fraction(1)
        note = f"first factor saturates at 1 because l+1 = {l + 1} >= p = {p}"
    factor2 = max_top_mass(p, 1, d2)
    return AdvantageBound(p * factor1 * factor2, FORMULA_GENERAL, True, note)


def bound_simplified(
    p: int,
    l: int,
    delta1: DistanceValue | RationalLike,
    delta2: DistanceValue | RationalLike,
) -> AdvantageBound:
    """Expanded product form p*(delta1 + (l+1)/p)*(delta2 + 1/p).

    Valid, and equal to the general bound, exactly when l+1 <= p*(1-delta1)
    and 1 <= p*(1-delta2); outside those conditions the value is still
    computed but flagged inapplicable with the violated condition named.
    """
    _check_scheme(p, l)
    d1 = as_distance(delta1, p)
    d2 = as_distance(delta2, p)
    raw = p * (d1 + Fraction(l + 1, p)) * (d2 + Fraction(1, p))
    if l + 1 > p * (1 - d1):
        return AdvantageBound(
            raw, FORMULA_SIMPLIFIED, False,
            f"requires l+1 <= p*(1-delta1): {l + 1} > {p * (1 - d1)}",
        )
    if 1 > p * (1 - d2):
        return AdvantageBound(
            raw, FORMULA_SIMPLIFIED, False,
            f"requires 1 <= p*(1-delta2): 1 > {p * (1 - d2)}",
        )
    return AdvantageBound(raw, FORMULA_SIMPLIFIED)


def bound_mu(
    p: int, l: int, mu1: RationalLike, mu2: RationalLike
) -> AdvantageBound:
    """The simplified bound reparameterized by mu_i = delta_i * p:
    (mu1 + l + 1) * (mu2 + 1) / p.

    Requires 0 <= mu_i <= p - 1 so that the implied distances are achievable;
    applicability mirrors the simplified bound's first condition, which reads
    mu1 <= p - (l+1) in this parameterization.
    """
    _check_scheme(p, l)
    m1 = exact_fraction(mu1)
    m2 = exact_fraction(mu2)
    for name, m in (("mu1", m1), ("mu2", m2)):
        if not 0 <= m <= p - 1:
            raise ValueError(
                f"{name} = {m} implies an unachievable distance; need 0 <= {name} <= {p - 1}"
            )
    raw = (m1 + l + 1) * (m2 + 1) / p
    if m1 > p - (l + 1):
        return AdvantageBound(
            raw, FORMULA_MU, False,
            f"requires mu1 <= p-(l+1): {m1} > {p - (l + 1)}",
        )
    return AdvantageBound(raw, FORMULA_MU)
