"""The one-shot forgery game: exact optimal advantages and Monte Carlo play.

The game: the challenger draws a key pair (k1 from P1, k2 from P2), the
adversary probes with a message a and receives its tag t0, then submits a
forgery (b, t1) with b != a and wins if t1 verifies for b.

Two adversary variants are enumerated exactly, in rational arithmetic:

* oblivious: picks (b, t1) ignoring the probe response entirely. Its best
  win probability is the largest value of forgery_win_prob over all (b, t1).
* adaptive_optimal: conditions on the set of keys consistent with (a, t0).
  Its value is max over probes a of the sum over t0 of the best joint
  probability of {observing t0 and the forgery verifying}, which equals the
  expected best conditional win probability without ever dividing by
  possibly-zero tag probabilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator

from .distributions import Distribution, UniformSource, sample
from .mac import KeyPair, MacParams, Message, Tag, hash_core

OBLIVIOUS = "oblivious"
ADAPTIVE = "adaptive_optimal"

# Exhaustive search refuses rather than silently sampling beyond this many
# candidate messages.
MESSAGE_BUDGET = 10**6

# Two-sided normal quantiles for the Wilson score intervals.
_Z95 = 1.959963984540054
_Z99 = 2.5758293035489004

_ZERO = Fraction(0)


class EnumerationBudgetError(RuntimeError):
    """The exhaustive search would exceed the candidate-message budget."""


@dataclass(frozen=True)
class KeyConstraintSet:
    """The keys consistent with one observed (message, tag) pair."""

    members: frozenset[KeyPair]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, key: KeyPair) -> bool:
        return key in self.members


@dataclass(frozen=True)
class AdversaryStrategy:
    """Forgery policy configuration for simulated games.

    variant selects which optimum is played when nothing is pinned down.
    probe, forgery and the tag fields override the computed optimum; at most
    one of forged_tag (a constant) and tag_offset (forge t1 = t0 + offset,
    adaptive only) may be given. probe_full_length widens the adaptive probe
    search from single-element messages to every admissible length.
    """

    variant: str = ADAPTIVE
    probe: Message | None = None
    forgery: Message | None = None
    forged_tag: Tag | None = None
    tag_offset: int | None = None
    probe_full_length: bool = False

    def __post_init__(self) -> None:
        if self.variant not in (OBLIVIOUS, ADAPTIVE):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.forged_tag is not None and self.tag_offset is not None:
            raise ValueError("give at most one of forged_tag and tag_offset")
        if self.variant == OBLIVIOUS and self.tag_offset is not None:
            raise ValueError("a tag offset depends on t0, which oblivious play ignores")


@dataclass(frozen=True)
class GameTranscript:
    """One played game, with the challenger-side verdict."""

    probe: Message
    observed_tag: Tag
    forgery: Message
    forged_tag: Tag
    won: bool

    def __post_init__(self) -> None:
        if self.forgery == self.probe:
            raise ValueError("the forged message must differ from the probe")


@dataclass(frozen=True)
class AdvantageEstimate:
    """Monte Carlo win-rate estimate with Wilson score intervals."""

    point: float
    wins: int
    trials: int
    ci95_low: float
    ci95_high: float
    ci99_low: float
    ci99_high: float
    method: str = "wilson"


def wilson_interval(wins: int, trials: int, z: float) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    phat = wins / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(
        phat * (1 - phat) / trials + z2 / (4 * trials * trials)
    )
    # the interval ends are exactly 0 and 1 at the boundary counts; rounding
    # must not pull them inside the point estimate
    low = 0.0 if wins == 0 else max(0.0, center - half)
    high = 1.0 if wins == trials else min(1.0, center + half)
    return low, high


def message_space_size(p: int, max_len: int) -> int:
    return sum(p**v for v in range(1, max_len + 1))


def _check_budget(p: int, max_len: int) -> None:
    size = message_space_size(p, max_len)
    if size > MESSAGE_BUDGET:
        raise EnumerationBudgetError(
            f"{size} candidate messages exceed the budget of {MESSAGE_BUDGET}; "
            "lower p or the message length"
        )


def _iter_value_tuples(p: int, max_len: int) -> Iterator[tuple[int, ...]]:
    for length in range(1, max_len + 1):
        yield from product(range(p), repeat=length)


def _hash_table(params: MacParams, values: tuple[int, ...]) -> tuple[int, ...]:
    p = params.field.p
    exp = params.lead_exponent(len(values))
    return tuple(hash_core(p, values, k1, exp) for k1 in range(p))


def _check_key_dists(params: MacParams, p1: Distribution, p2: Distribution) -> None:
    p = params.field.p
    if p1.n != p or p2.n != p:
        raise ValueError(
            f"key distributions must have support size {p}, got {p1.n} and {p2.n}"
        )


def _resolve_max_len(params: MacParams, max_len: int | None) -> int:
    limit = params.max_len if max_len is None else max_len
    if not 1 <= limit <= params.max_len:
        raise ValueError(f"max_len must be in [1, {params.max_len}], got {limit}")
    return limit


def consistent_keys(params: MacParams, a: Message, t0: Tag) -> KeyConstraintSet:
    """Every key pair that signs the probe a to exactly t0.

    For this scheme the mask determines k2 from k1, so there is exactly one
    member per k1 value and the set always has size p.
    """
    p = params.field.p
    hashes = _hash_table(params, a.values())
    t = t0.t.value
    return KeyConstraintSet(
        frozenset(params.key(k1, t - hashes[k1]) for k1 in range(p))
    )


def forgery_win_prob(
    params: MacParams,
    key1_dist: Distribution,
    key2_dist: Distribution,
    b: Message,
    t1: Tag,
) -> Fraction:
    """Probability that (b, t1) verifies under a fresh key pair.

    Decomposes over k1: the mask must land exactly on t1 minus the hash, and
    the key components are drawn independently.
    """
    _check_key_dists(params, key1_dist, key2_dist)
    p = params.field.p
    hashes = _hash_table(params, b.values())
    t = t1.t.value
    return sum(
        (
            key1_dist.probs[k1] * key2_dist.probs[(t - hashes[k1]) % p]
            for k1 in range(p)
        ),
        _ZERO,
    )


def _best_oblivious(
    params: MacParams,
    key1_dist: Distribution,
    key2_dist: Distribution,
    max_len: int,
    forgery: tuple[int, ...] | None = None,
    forced_tag: int | None = None,
    avoid: tuple[int, ...] | None = None,
) -> tuple[Fraction, tuple[int, ...], int]:
    """Maximize the one-shot win probability over forgeries (b, t1).

    Ties go to the first candidate in enumeration order (shortest message
    first, lexicographic, then tag value). avoid excludes one message, used
    when the probe is pinned in advance.
    """
    p = params.field.p
    p1, p2 = key1_dist.probs, key2_dist.probs
    candidates = [forgery] if forgery is not None else _iter_value_tuples(p, max_len)
    tags = [forced_tag] if forced_tag is not None else range(p)
    best = None
    for b in candidates:
        if b == avoid:
            continue
        hashes = _hash_table(params, b)
        for t1 in tags:
            w = sum(
                (p1[k1] * p2[(t1 - hashes[k1]) % p] for k1 in range(p)), _ZERO
            )
            if best is None or w > best[0]:
                best = (w, b, t1)
    if best is None:
        raise ValueError("no admissible forgery differs from the probe")
    return best


def _best_adaptive(
    params: MacParams,
    key1_dist: Distribution,
    key2_dist: Distribution,
    max_len: int,
    probe_max_len: int,
    probe: tuple[int, ...] | None = None,
    forgery: tuple[int, ...] | None = None,
    forced_tag: int | None = None,
    tag_offset: int | None = None,
) -> tuple[Fraction, tuple[int, ...], dict[int, tuple[tuple[int, ...], tuple[int, ...], int]]]:
    """Optimize adaptive play: probe choice plus a per-t0 forgery policy.

    Works with the joint probability of {key weight and observing t0} so
    zero-probability tags contribute nothing and no conditioning division is
    needed. Returns the exact advantage, the probe, and a map from each t0
    to (forgery values, its per-k1 hash table, forged tag).
    """
    p = params.field.p
    p1, p2 = key1_dist.probs, key2_dist.probs
    probes = [probe] if probe is not None else _iter_value_tuples(p, probe_max_len)
    best_total = None
    best_probe: tuple[int, ...] | None = None
    best_policy: dict[int, tuple[tuple[int, ...], tuple[int, ...], int]] = {}
    for a in probes:
        fa = _hash_table(params, a)
        # weight[k1][t0]: probability of drawing k1 and then observing t0,
        # i.e. of the mask being exactly t0 - hash(a, k1)
        weight = [
            [p1[k1] * p2[(t0 - fa[k1]) % p] for t0 in range(p)] for k1 in range(p)
        ]
        if forgery is not None:
            candidates: Iterable[tuple[int, ...]] = [forgery]
        else:
            candidates = _iter_value_tuples(p, max_len)
        # per observed tag: best (joint probability, forgery, hashes, forged tag)
        rows: list[tuple[Fraction, tuple[int, ...], tuple[int, ...], int] | None] = [None] * p
        for b in candidates:
            if b == a:
                continue
            fb = _hash_table(params, b)
            joint = [[_ZERO] * p for _ in range(p)]  # [t0][t1]
            for k1 in range(p):
                w_row = weight[k1]
                shift = (fb[k1] - fa[k1]) % p
                for t0 in range(p):
                    w = w_row[t0]
                    if w:
                        joint[t0][(t0 + shift) % p] += w
            for t0 in range(p):
                row = joint[t0]
                if forced_tag is not None:
                    t1 = forced_tag
                elif tag_offset is not None:
                    t1 = (t0 + tag_offset) % p
                else:
                    t1 = row.index(max(row))
                value = row[t1]
                if rows[t0] is None or value > rows[t0][0]:
                    rows[t0] = (value, b, fb, t1)
        if any(r is None for r in rows):
            # every candidate forgery coincides with this probe; try the next one
            continue
        total = sum((r[0] for r in rows), _ZERO)
        if best_total is None or total > best_total:
            best_total = total
            best_probe = a
            best_policy = {t0: (r[1], r[2], r[3]) for t0, r in enumerate(rows)}
    if best_total is None or best_probe is None:
        raise ValueError("no admissible forgery differs from the probe")
    return best_total, best_probe, best_policy


def exact_advantage_oblivious(
    params: MacParams,
    key1_dist: Distribution,
    key2_dist: Distribution,
    max_len: int | None = None,
) -> Fraction:
    """Win probability of the best forgery chosen without using the probe
    response, by exhaustive enumeration of (b, t1)."""
    _check_key_dists(params, key1_dist, key2_dist)
    limit = _resolve_max_len(params, max_len)
    _check_budget(params.field.p, limit)
    value, _, _ = _best_oblivious(params, key1_dist, key2_dist, limit)
    return value


def exact_advantage_adaptive(
    params: MacParams,
    key1_dist: Distribution,
    key2_dist: Distribution,
    max_len: int | None = None,
    probe_full_length: bool = False,
) -> Fraction:
    """Win probability of the optimal adversary that conditions its forgery
    on the keys consistent with the observed (probe, tag).

    The probe is optimized over single-element messages by default; set
    probe_full_length to search every admissible probe length instead.
    """
    _check_key_dists(params, key1_dist, key2_dist)
    limit = _resolve_max_len(params, max_len)
    _check_budget(params.field.p, limit)
    probe_limit = limit if probe_full_length else 1
    value, _, _ = _best_adaptive(
        params, key1_dist, key2_dist, limit, probe_limit
    )
    return value


@dataclass(frozen=True)
class _PreparedStrategy:
    """A strategy resolved to lookup tables over raw residues."""

    probe: tuple[int, ...]
    probe_hashes: tuple[int, ...]
    # policy[t0] = (forgery values, forgery hash per k1, forged tag)
    policy: tuple[tuple[tuple[int, ...], tuple[int, ...], int], ...]


def _default_probe(p: int, avoid: tuple[int, ...]) -> tuple[int, ...]:
    probe = (0,)
    if probe == avoid:
        probe = (1,)
    return probe


@lru_cache(maxsize=None)
def _prepare_strategy(
    params: MacParams,
    key1_dist: Distribution,
    key2_dist: Distribution,
    strategy: AdversaryStrategy,
    max_len: int,
) -> _PreparedStrategy:
    p = params.field.p
    forgery = strategy.forgery.values() if strategy.forgery is not None else None
    forced_tag = (
        strategy.forged_tag.t.value if strategy.forged_tag is not None else None
    )
    if strategy.variant == OBLIVIOUS:
        pinned_probe = strategy.probe.values() if strategy.probe is not None else None
        _, b, t1 = _best_oblivious(
            params, key1_dist, key2_dist, max_len, forgery, forced_tag, pinned_probe
        )
        probe = pinned_probe if pinned_probe is not None else _default_probe(p, b)
        fb = _hash_table(params, b)
        policy = ((b, fb, t1),) * p
    else:
        probe_given = strategy.probe.values() if strategy.probe is not None else None
        probe_limit = max_len if strategy.probe_full_length else 1
        _, probe, mapping = _best_adaptive(
            params,
            key1_dist,
            key2_dist,
            max_len,
            probe_limit,
            probe_given,
            forgery,
            forced_tag,
            strategy.tag_offset,
        )
        policy = tuple(mapping[t0] for t0 in range(p))
    return _PreparedStrategy(probe, _hash_table(params, probe), policy)


def _play_core(
    prepared: _PreparedStrategy,
    p: int,
    key1_dist: Distribution,
    key2_dist: Distribution,
    rng: UniformSource,
    key: tuple[int, int] | None,
) -> tuple[int, int, tuple[int, ...], int, bool]:
    if key is None:
        k1 = sample(key1_dist, rng)
        k2 = sample(key2_dist, rng)
    else:
        k1, k2 = key
    t0 = (prepared.probe_hashes[k1] + k2) % p
    b, fb, t1 = prepared.policy[t0]
    won = (fb[k1] + k2) % p == t1
    return t0, k1, b, t1, won


def play_game(
    params: MacParams,
    key1_dist: Distribution,
    key2_dist: Distribution,
    strategy: AdversaryStrategy,
    rng: UniformSource,
    key: KeyPair | None = None,
) -> GameTranscript:
    """Play one game and return the transcript.

    The challenger's key is drawn from the key distributions via the supplied
    generator; pass key to pin it instead (a test seam, the challenger then
    draws nothing).
    """
    _check_key_dists(params, key1_dist, key2_dist)
    prepared = _prepare_strategy(
        params, key1_dist, key2_dist, strategy, params.max_len
    )
    pinned = (key.k1.value, key.k2.value) if key is not None else None
    t0, _, b, t1, won = _play_core(
        prepared, params.field.p, key1_dist, key2_dist, rng, pinned
    )
    return GameTranscript(
        probe=params.message(prepared.probe),
        observed_tag=params.tag(t0),
        forgery=params.message(b),
        forged_tag=params.tag(t1),
        won=won,
    )


_M64 = 0xFFFFFFFFFFFFFFFF


class SplitMix64:
    """Minimal counter-based generator with the random.Random.random() shape.

    Construction costs a couple of integer operations, so one independent
    instance per Monte Carlo trial is affordable; random() yields 53-bit
    uniforms like the stdlib generator.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _M64

    def random(self) -> float:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _M64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
        z ^= z >> 31
        return (z >> 11) * 2.0**-53


def _trial_rng(seed: int, index: int) -> SplitMix64:
    # one independent generator per trial, so the aggregate is invariant
    # under any execution order
    return SplitMix64(seed * 0x9E3779B97F4A7C15 + index * 0xD1B54A32D192ED03)


def monte_carlo_advantage(
    params: MacParams,
    key1_dist: Distribution,
    key2_dist: Distribution,
    strategy: AdversaryStrategy,
    trials: int,
    seed: int,
) -> AdvantageEstimate:
    """Estimate the strategy's win rate over seeded independent games.

    Each trial uses its own generator derived from (seed, trial index), so
    the result is reproducible and independent of execution order. Intervals
    are Wilson score at 95% and 99%.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    _check_key_dists(params, key1_dist, key2_dist)
    prepared = _prepare_strategy(
        params, key1_dist, key2_dist, strategy, params.max_len
    )
    p = params.field.p
    wins = 0
    for i in range(trials):
        rng = _trial_rng(seed, i)
        won = _play_core(prepared, p, key1_dist, key2_dist, rng, None)[4]
        wins += won
    lo95, hi95 = wilson_interval(wins, trials, _Z95)
    lo99, hi99 = wilson_interval(wins, trials, _Z99)
    return AdvantageEstimate(
        point=wins / trials,
        wins=wins,
        trials=trials,
        ci95_low=lo95,
        ci95_high=hi95,
        ci99_low=lo99,
        ci99_high=hi99,
    )
