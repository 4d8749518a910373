"""Probability distributions on a finite support, with exact rational arithmetic.

Everything here is exact: statistical distance to uniform, the closed form for
the largest probability mass any s outcomes can carry at a given distance, the
extremal distribution attaining it, and the distance-preserving transformations
that reduce an arbitrary distribution to that extremal shape. Floating point
never appears; sampling consumes a 53-bit uniform variate and inverts the exact
cumulative sums.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import floor
from typing import Iterable, Iterator, Protocol

RationalLike = Fraction | int | str

# Resolution of one generator draw: random() returns k / 2**53 with k integer.
_SAMPLE_BITS = 53
_SAMPLE_SCALE = 1 << _SAMPLE_BITS


class UniformSource(Protocol):
    """Any seeded generator exposing random(); random.Random qualifies."""

    def random(self) -> float: ...


class UnachievableDeltaError(ValueError):
    """No distribution on the requested grid attains the distance exactly."""


def exact_fraction(value: RationalLike) -> Fraction:
    """Coerce to Fraction, rejecting floats (they silently lose exactness)."""
    if isinstance(value, float):
        raise TypeError(
            f"got float {value!r}; pass an exact rational such as '1/10'"
        )
    return Fraction(value)


@dataclass(frozen=True)
class Distribution:
    """A probability distribution over support positions 0..n-1.

    Entries are exact rationals, each >= 0, summing to exactly 1.
    """

    probs: tuple[Fraction, ...]

    def __init__(self, probs: Iterable[RationalLike]):
        entries = tuple(exact_fraction(q) for q in probs)
        if not entries:
            raise ValueError("support must contain at least one point")
        if any(q < 0 for q in entries):
            raise ValueError(f"negative probability in {entries}")
        if sum(entries) != 1:
            raise ValueError(f"probabilities sum to {sum(entries)}, not 1")
        object.__setattr__(self, "probs", entries)

    @property
    def n(self) -> int:
        return len(self.probs)

    def __getitem__(self, index: int) -> Fraction:
        return self.probs[index]

    @cached_property
    def _cdf(self) -> tuple[Fraction, ...]:
        total = Fraction(0)
        out = []
        for q in self.probs:
            total += q
            out.append(total)
        return tuple(out)

    @cached_property
    def _sample_thresholds(self) -> tuple[int, ...]:
        # ceil(c * 2**53) for each cumulative sum c: a 53-bit draw k selects
        # the first index whose threshold exceeds k, i.e. the first index with
        # k / 2**53 < c. Exact, zero-probability entries are never selected.
        return tuple(
            (c.numerator * _SAMPLE_SCALE + c.denominator - 1) // c.denominator
            for c in self._cdf
        )


def uniform(n: int) -> Distribution:
    """The uniform distribution on n points."""
    if n < 1:
        raise ValueError(f"support size must be >= 1, got {n}")
    return Distribution((Fraction(1, n),) * n)


def point_mass(n: int, index: int) -> Distribution:
    """All mass on one support point."""
    if not 0 <= index < n:
        raise ValueError(f"index {index} outside support of size {n}")
    return Distribution(
        tuple(Fraction(1) if i == index else Fraction(0) for i in range(n))
    )


def stat_distance(p: Distribution, q: Distribution) -> Fraction:
    """Statistical distance: half the L1 distance between two distributions."""
    if p.n != q.n:
        raise ValueError(f"support sizes differ: {p.n} vs {q.n}")
    return sum((abs(a - b) for a, b in zip(p.probs, q.probs)), Fraction(0)) / 2


@dataclass(frozen=True)
class DistanceValue:
    """A statistical distance to uniform, tied to a support size.

    The achievable range on n points is [0, 1 - 1/n]; a point mass attains
    the maximum.
    """

    delta: Fraction
    n: int

    def __init__(self, delta: RationalLike, n: int):
        d = exact_fraction(delta)
        if n < 1:
            raise ValueError(f"support size must be >= 1, got {n}")
        if not 0 <= d <= 1 - Fraction(1, n):
            raise ValueError(
                f"distance {d} outside achievable range [0, {1 - Fraction(1, n)}] "
                f"for support size {n}"
            )
        object.__setattr__(self, "delta", d)
        object.__setattr__(self, "n", n)


def as_distance(delta: DistanceValue | RationalLike, n: int) -> Fraction:
    """Validate a distance-to-uniform for support size n and return it exactly."""
    if isinstance(delta, DistanceValue):
        if delta.n != n:
            raise ValueError(f"distance is for support {delta.n}, expected {n}")
        return delta.delta
    return DistanceValue(delta, n).delta


@dataclass(frozen=True)
class SupportPartition:
    """Support indices split by how each entry compares to the uniform weight."""

    above: frozenset[int]
    below: frozenset[int]
    at_uniform: frozenset[int]
    zero: frozenset[int]


def support_partition(dist: Distribution) -> SupportPartition:
    """Partition indices into above-uniform, below-uniform-positive, exactly
    uniform, and zero entries."""
    u = Fraction(1, dist.n)
    above, below, at_u, zero = [], [], [], []
    for i, q in enumerate(dist.probs):
        if q > u:
            above.append(i)
        elif q == u:
            at_u.append(i)
        elif q > 0:
            below.append(i)
        else:
            zero.append(i)
    return SupportPartition(
        frozenset(above), frozenset(below), frozenset(at_u), frozenset(zero)
    )


def max_top_mass(
    n: int, s: int, delta: DistanceValue | RationalLike
) -> Fraction:
    """Largest total probability any s outcomes can carry, over all
    distributions on n points at statistical distance delta from uniform.

    Closed form: delta + s/n while s <= n*(1 - delta), and 1 beyond that.
    """
    if not 1 <= s < n:
        raise ValueError(f"s must satisfy 1 <= s < n, got s={s}, n={n}")
    d = as_distance(delta, n)
    if s <= n * (1 - d):
        return d + Fraction(s, n)
    return Fraction(1)


def extremal_distribution(
    n: int, delta: DistanceValue | RationalLike
) -> Distribution:
    """The distribution attaining max_top_mass simultaneously for every s.

    One heavy entry delta + 1/n, a run of exactly-uniform entries, one
    fractional remainder entry, then zeros. Its distance to uniform is
    exactly delta.
    """
    d = as_distance(delta, n)
    u = Fraction(1, n)
    dn = d * n
    k = n - floor(dn)
    entries = [d + u]
    if k >= 2:
        entries += [u] * (k - 2)
        entries.append((1 - (dn - floor(dn))) / n)
    entries += [Fraction(0)] * (n - k)
    return Distribution(entries)


def sort_by_mass(dist: Distribution) -> Distribution:
    """Reorder entries in non-increasing order (stable, so ties keep their
    original relative order). Distance to uniform is unchanged."""
    return Distribution(sorted(dist.probs, reverse=True))


def pool_surplus(dist: Distribution) -> Distribution:
    """Move the second-largest above-uniform excess onto the largest entry.

    Requires at least two entries above uniform; shrinks that set by one and
    preserves the distance to uniform exactly.
    """
    u = Fraction(1, dist.n)
    if len(support_partition(dist).above) <= 1:
        raise ValueError("needs at least two entries above uniform")
    out = list(sort_by_mass(dist).probs)
    out[0] += out[1] - u
    out[1] = u
    return Distribution(out)


def pool_deficit(dist: Distribution) -> Distribution:
    """Combine the two largest below-uniform deficits into at most one.

    Requires at least two positive entries below uniform. The pair chosen is
    the two smallest positive entries (ties broken by index). Writing their
    deficits as tau1 <= tau2: if tau1 + tau2 <= 1/n the larger entry rises to
    exactly 1/n and the smaller absorbs both deficits; otherwise the larger
    entry drops to zero and the smaller becomes 2/n - (tau1 + tau2). The
    result is then sorted. Distance to uniform is preserved exactly and the
    below-uniform set strictly shrinks.
    """
    u = Fraction(1, dist.n)
    below = support_partition(dist).below
    if len(below) <= 1:
        raise ValueError("needs at least two positive entries below uniform")
    smallest = sorted(below, key=lambda i: (dist.probs[i], i))[:2]
    j, i = smallest[0], smallest[1]  # deficit at j (tau2) >= deficit at i (tau1)
    tau1, tau2 = u - dist.probs[i], u - dist.probs[j]
    out = list(dist.probs)
    if tau1 + tau2 <= u:
        out[i] = u
        out[j] = u - (tau1 + tau2)
    else:
        out[i] = Fraction(0)
        out[j] = 2 * u - (tau1 + tau2)
    return Distribution(sorted(out, reverse=True))


def to_extremal_form(dist: Distribution) -> Distribution:
    """Reduce a distribution to the extremal shape at its own distance.

    Sorts, then pools surpluses until at most one entry sits above uniform,
    then pools deficits until at most one positive entry sits below uniform.
    Terminates because every step strictly shrinks one of those sets; the
    result equals extremal_distribution(n, distance-to-uniform) exactly.
    """
    out = sort_by_mass(dist)
    while len(support_partition(out).above) > 1:
        out = pool_surplus(out)
    while len(support_partition(out).below) > 1:
        out = pool_deficit(out)
    return out


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def iter_grid_distributions(n: int, denominator: int) -> Iterator[Distribution]:
    """Every distribution on n points whose entries are multiples of
    1/denominator, in lexicographic order of the numerators."""
    if n < 1 or denominator < 1:
        raise ValueError("support size and denominator must be >= 1")
    for counts in _compositions(denominator, n):
        yield Distribution(Fraction(c, denominator) for c in counts)


def _grid_delta_numerator(counts: tuple[int, ...], n: int, d: int) -> int:
    # distance to uniform of counts/d is this value over 2*n*d
    return sum(abs(n * c - d) for c in counts)


def max_top_mass_bruteforce(
    n: int,
    s: int,
    delta: DistanceValue | RationalLike,
    grid_denominator: int,
    mode: str = "exact",
) -> Fraction:
    """Brute-force counterpart of max_top_mass over a probability grid.

    Enumerates every distribution whose entries are multiples of
    1/grid_denominator, keeps those whose distance to uniform equals delta
    (mode="exact") or is at most delta (mode="at_most"), and returns the
    largest sum of s entries among them.

    The grid maximum matches the closed form whenever the extremal
    distribution itself lies on the grid, which holds when n divides
    grid_denominator; on other grids it is a lower bound. Raises
    UnachievableDeltaError when no grid distribution passes the filter.
    """
    if not 1 <= s < n:
        raise ValueError(f"s must satisfy 1 <= s < n, got s={s}, n={n}")
    if grid_denominator < 1:
        raise ValueError(f"grid denominator must be >= 1, got {grid_denominator}")
    if mode not in ("exact", "at_most"):
        raise ValueError(f"mode must be 'exact' or 'at_most', got {mode!r}")
    d = as_distance(delta, n)
    target = d * 2 * n * grid_denominator  # compare integer numerators
    best: int | None = None
    for counts in _compositions(grid_denominator, n):
        dev = _grid_delta_numerator(counts, n, grid_denominator)
        keep = dev == target if mode == "exact" else dev <= target
        if not keep:
            continue
        top = sum(sorted(counts, reverse=True)[:s])
        if best is None or top > best:
            best = top
    if best is None:
        raise UnachievableDeltaError(
            f"no distribution on the 1/{grid_denominator} grid over {n} points "
            f"has distance {'exactly' if mode == 'exact' else 'at most'} {d}"
        )
    return Fraction(best, grid_denominator)


def max_top_mass_table(
    n: int, grid_denominator: int
) -> dict[Fraction, tuple[Fraction, ...]]:
    """One grid enumeration shared across all distances and all s.

    Maps each distance achievable on the 1/grid_denominator grid to the tuple
    of brute-force maxima for s = 1 .. n-1. Equivalent to calling
    max_top_mass_bruteforce per (delta, s), but enumerates only once.
    """
    if n < 1 or grid_denominator < 1:
        raise ValueError("support size and denominator must be >= 1")
    best: dict[int, list[int]] = {}
    for counts in _compositions(grid_denominator, n):
        dev = _grid_delta_numerator(counts, n, grid_denominator)
        ordered = sorted(counts, reverse=True)
        prefix = []
        total = 0
        for c in ordered[: n - 1]:
            total += c
            prefix.append(total)
        row = best.get(dev)
        if row is None:
            best[dev] = prefix
        else:
            for idx, value in enumerate(prefix):
                if value > row[idx]:
                    row[idx] = value
    return {
        Fraction(dev, 2 * n * grid_denominator): tuple(
            Fraction(v, grid_denominator) for v in row
        )
        for dev, row in best.items()
    }


def sample(dist: Distribution, rng: UniformSource) -> int:
    """Draw one support index with the distribution's exact probabilities.

    Inverse-CDF against one uniform variate: the generator's 53-bit draw
    k/2**53 selects the first index whose exact cumulative sum exceeds it
    (thresholds are precomputed as exact ceilings, so no rounding occurs).
    Zero-probability indices are never returned.
    """
    draw = int(rng.random() * _SAMPLE_SCALE)
    return bisect_right(dist._sample_thresholds, draw)
