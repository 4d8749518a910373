"""Experiment configuration, advantage reports, and exact serialization.

Rationals travel as "numerator/denominator" strings so JSON and CSV round-trip
without loss; a convenience decimal accompanies them where a human will read
the output.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any

from .attack import (
    ADAPTIVE,
    OBLIVIOUS,
    AdvantageEstimate,
    AdversaryStrategy,
    exact_advantage_adaptive,
    exact_advantage_oblivious,
    monte_carlo_advantage,
)
from .bounds import (
    FORMULA_GENERAL,
    FORMULA_MU,
    FORMULA_SIMPLIFIED,
    FORMULA_UNIFORM,
    AdvantageBound,
    bound_general,
    bound_mu,
    bound_simplified,
    bound_uniform,
)
from .distributions import (
    Distribution,
    extremal_distribution,
    point_mass,
    stat_distance,
    uniform,
)
from .field import PrimeField
from .mac import MacParams

DEFAULT_SEED = 1729

VARIANTS = (OBLIVIOUS, ADAPTIVE)


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def rational_json(x: Fraction) -> dict[str, Any]:
    return {"exact": fraction_str(x), "decimal": float(x)}


def parse_rational(text: str, p: int | None = None) -> Fraction:
    """Parse '0', '3', '1/5', or the per-prime form '2/p'."""
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        if den.strip() == "p":
            if p is None:
                raise ValueError(f"'{text}' needs a prime to substitute for p")
            return Fraction(int(num), p)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def parse_distribution_spec(spec: str, p: int) -> Distribution:
    """Materialize a key-distribution spec over Z_p.

    Forms: 'uniform', 'extremal:<delta>', 'point:<index>', and
    'explicit:<q0,q1,...>' with exact rational entries. Distances and
    entries accept the '<k>/p' shorthand.
    """
    kind, _, arg = spec.strip().partition(":")
    if kind == "uniform":
        return uniform(p)
    if kind == "extremal":
        return extremal_distribution(p, parse_rational(arg, p))
    if kind == "point":
        return point_mass(p, int(arg))
    if kind == "explicit":
        return Distribution(parse_rational(t, p) for t in arg.split(","))
    raise ValueError(
        f"unknown distribution spec {spec!r}; expected uniform, extremal:<delta>, "
        "point:<index>, or explicit:<q0,q1,...>"
    )


@dataclass(frozen=True)
class ExperimentConfig:
    """One attack-game experiment cell."""

    p: int
    l: int
    k1_spec: str = "uniform"
    k2_spec: str = "uniform"
    variants: tuple[str, ...] = VARIANTS
    exact: bool = True
    mc_trials: int = 0
    probe_full_length: bool = False
    fixed_degree: bool = False
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        for v in self.variants:
            if v not in VARIANTS:
                raise ValueError(f"unknown variant {v!r}; expected one of {VARIANTS}")
        if self.mc_trials < 0:
            raise ValueError("mc_trials must be >= 0")
        if not self.exact and self.mc_trials == 0:
            raise ValueError("nothing to do: exact is off and mc_trials is 0")

    def to_dict(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "l": self.l,
            "k1_spec": self.k1_spec,
            "k2_spec": self.k2_spec,
            "variants": list(self.variants),
            "exact": self.exact,
            "mc_trials": self.mc_trials,
            "probe_full_length": self.probe_full_length,
            "fixed_degree": self.fixed_degree,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class BoundCheck:
    """One exact-advantage-versus-bound comparison."""

    variant: str
    formula: str
    advantage: Fraction
    bound_effective: Fraction
    passed: bool


@dataclass
class AdvantageReport:
    """Everything one experiment produced.

    The distances are recomputed from the materialized distributions, never
    echoed from the configuration.
    """

    config: ExperimentConfig
    delta1: Fraction
    delta2: Fraction
    exact_advantages: dict[str, Fraction] = field(default_factory=dict)
    estimates: dict[str, AdvantageEstimate] = field(default_factory=dict)
    bounds: dict[str, AdvantageBound] = field(default_factory=dict)
    checks: list[BoundCheck] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json_dict(self, include_timings: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "config": self.config.to_dict(),
            "delta1": rational_json(self.delta1),
            "delta2": rational_json(self.delta2),
            "exact_advantage": {
                v: rational_json(a) for v, a in self.exact_advantages.items()
            },
            "monte_carlo": {
                v: {
                    "point": e.point,
                    "wins": e.wins,
                    "trials": e.trials,
                    "ci95": [e.ci95_low, e.ci95_high],
                    "ci99": [e.ci99_low, e.ci99_high],
                    "method": e.method,
                }
                for v, e in self.estimates.items()
            },
            "bounds": {
                name: {
                    "raw": rational_json(b.raw),
                    "effective": rational_json(b.effective),
                    "applicable": b.applicable,
                    "reason": b.reason,
                }
                for name, b in self.bounds.items()
            },
            "checks": [
                {
                    "variant": c.variant,
                    "formula": c.formula,
                    "advantage": rational_json(c.advantage),
                    "bound_effective": rational_json(c.bound_effective),
                    "pass": c.passed,
                }
                for c in self.checks
            ],
            "all_pass": self.all_pass,
        }
        if include_timings:
            out["timings"] = dict(self.timings)
        return out

    def human_lines(self, include_timings: bool = True) -> list[str]:
        cfg = self.config
        lines = [
            f"scheme: p={cfg.p} l={cfg.l}"
            + (" (fixed-degree variant)" if cfg.fixed_degree else ""),
            f"keys:   k1={cfg.k1_spec} k2={cfg.k2_spec} (seed {cfg.seed})",
            f"measured distance to uniform: delta1={self.delta1} delta2={self.delta2}",
        ]
        for v, a in self.exact_advantages.items():
            lines.append(f"exact advantage [{v}]: {a} = {float(a):.6g}")
        for v, e in self.estimates.items():
            lines.append(
                f"monte carlo [{v}]: {e.point:.6g} ({e.wins}/{e.trials}), "
                f"95% [{e.ci95_low:.6g}, {e.ci95_high:.6g}], "
                f"99% [{e.ci99_low:.6g}, {e.ci99_high:.6g}] ({e.method})"
            )
        for name, b in self.bounds.items():
            status = "applicable" if b.applicable else f"not applicable ({b.reason})"
            if b.applicable and b.reason:
                status += f" ({b.reason})"
            lines.append(
                f"bound [{name}]: raw {b.raw} = {float(b.raw):.6g}, "
                f"effective {b.effective}, {status}"
            )
        for c in self.checks:
            verdict = "pass" if c.passed else "FAIL"
            lines.append(
                f"check [{c.variant} <= {c.formula}]: {c.advantage} <= "
                f"{c.bound_effective}: {verdict}"
            )
        lines.append(f"all bound checks pass: {self.all_pass}")
        if include_timings and self.timings:
            joined = ", ".join(f"{k}={v:.3f}s" for k, v in self.timings.items())
            lines.append(f"timings: {joined}")
        return lines


def standard_bounds(
    p: int, l: int, delta1: Fraction, delta2: Fraction
) -> dict[str, AdvantageBound]:
    """All four closed-form bounds at the measured distances; the mu form is
    evaluated at mu_i = delta_i * p.

    The uniform-keys formula is only a valid bound when both distances are
    zero; at skewed keys it is reported for reference but flagged
    inapplicable so it never counts as a violated check.
    """
    uniform_bound = bound_uniform(p, l)
    if delta1 != 0 or delta2 != 0:
        uniform_bound = replace(
            uniform_bound,
            applicable=False,
            reason=f"assumes uniform keys, but delta1={delta1}, delta2={delta2}",
        )
    return {
        FORMULA_UNIFORM: uniform_bound,
        FORMULA_GENERAL: bound_general(p, l, delta1, delta2),
        FORMULA_SIMPLIFIED: bound_simplified(p, l, delta1, delta2),
        FORMULA_MU: bound_mu(p, l, delta1 * p, delta2 * p),
    }


def run_experiment(config: ExperimentConfig) -> AdvantageReport:
    """Materialize the distributions, compute what the config asks for, and
    compare every exact advantage against every applicable bound."""
    prime_field = PrimeField(config.p)
    params = MacParams(prime_field, config.l, config.fixed_degree)
    key1 = parse_distribution_spec(config.k1_spec, config.p)
    key2 = parse_distribution_spec(config.k2_spec, config.p)
    u = uniform(config.p)
    report = AdvantageReport(
        config=config,
        delta1=stat_distance(key1, u),
        delta2=stat_distance(key2, u),
    )
    if config.exact:
        for variant in config.variants:
            start = time.perf_counter()
            if variant == OBLIVIOUS:
                adv = exact_advantage_oblivious(params, key1, key2)
            else:
                adv = exact_advantage_adaptive(
                    params, key1, key2, probe_full_length=config.probe_full_length
                )
            report.timings[f"exact_{variant}"] = time.perf_counter() - start
            report.exact_advantages[variant] = adv
    if config.mc_trials > 0:
        for variant in config.variants:
            strategy = AdversaryStrategy(
                variant=variant, probe_full_length=config.probe_full_length
            )
            start = time.perf_counter()
            report.estimates[variant] = monte_carlo_advantage(
                params, key1, key2, strategy, config.mc_trials, config.seed
            )
            report.timings[f"mc_{variant}"] = time.perf_counter() - start
    report.bounds = standard_bounds(config.p, config.l, report.delta1, report.delta2)
    for variant, adv in report.exact_advantages.items():
        for name, b in report.bounds.items():
            if not b.applicable:
                continue
            report.checks.append(
                BoundCheck(variant, name, adv, b.effective, adv <= b.effective)
            )
    return report
