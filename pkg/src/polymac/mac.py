"""One-time polynomial authenticator over a prime field.

The tag is a polynomial hash of the message under the first key component,
masked by the second: tag = hash(m, k1) + k2. The hash of a length-v message
(a_1, ..., a_v) is k1**(v+1) + a_1*k1**v + ... + a_v*k1, so every monomial
carries a factor k1 and there is no constant term.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterable, Iterator, Sequence

from .field import FieldElement, PrimeField


class VerifyResult(Enum):
    ACCEPT = "accept"
    REJECT = "reject"


@dataclass(frozen=True)
class MacParams:
    """Scheme parameters: the field and the maximal message length.

    By default the leading key term is k1**(length+1), rising with the
    message length. With fixed_degree=True it is k1**(max_len+1) for every
    message, a variant kept for comparison experiments.
    """

    field: PrimeField
    max_len: int
    fixed_degree: bool = False

    def __post_init__(self) -> None:
        if self.max_len < 1:
            raise ValueError(f"max_len must be >= 1, got {self.max_len}")

    def message(self, values: Iterable[int]) -> Message:
        return Message(tuple(self.field.element(v) for v in values))

    def key(self, k1: int, k2: int) -> KeyPair:
        return KeyPair(self.field.element(k1), self.field.element(k2))

    def tag(self, t: int) -> Tag:
        return Tag(self.field.element(t))

    def lead_exponent(self, length: int) -> int:
        return (self.max_len if self.fixed_degree else length) + 1


@dataclass(frozen=True)
class Message:
    """A non-empty sequence of field elements, all from one field."""

    elements: tuple[FieldElement, ...]

    def __post_init__(self) -> None:
        if not self.elements:
            raise ValueError("messages must contain at least one element")
        first = self.elements[0].field
        if any(e.field != first for e in self.elements):
            raise ValueError("message elements must share one modulus")

    @property
    def field(self) -> PrimeField:
        return self.elements[0].field

    @property
    def length(self) -> int:
        return len(self.elements)

    def values(self) -> tuple[int, ...]:
        return tuple(e.value for e in self.elements)


@dataclass(frozen=True)
class KeyPair:
    k1: FieldElement
    k2: FieldElement

    def __post_init__(self) -> None:
        if self.k1.field != self.k2.field:
            raise ValueError("key components must share one modulus")

    @property
    def field(self) -> PrimeField:
        return self.k1.field


@dataclass(frozen=True)
class Tag:
    t: FieldElement


def hash_core(p: int, coeffs: Sequence[int], k1: int, lead_exponent: int) -> int:
    """Integer-level Horner evaluation of the polynomial hash.

    Computes k1**lead_exponent + coeffs[0]*k1**v + ... + coeffs[v-1]*k1
    mod p, where v = len(coeffs). Shared by the enumeration paths, which
    work on raw residues for speed.
    """
    acc = 0
    for a in coeffs:
        acc = (acc * k1 + a) % p
    return (acc * k1 + pow(k1, lead_exponent, p)) % p


def _check_message(params: MacParams, m: Message) -> None:
    if m.field != params.field:
        raise ValueError("message modulus differs from the scheme's")
    if m.length > params.max_len:
        raise ValueError(f"message length {m.length} exceeds max_len {params.max_len}")


def polynomial_hash(params: MacParams, m: Message, k1: FieldElement) -> FieldElement:
    """The keyed polynomial part of the tag (everything except the mask)."""
    _check_message(params, m)
    if k1.field != params.field:
        raise ValueError("key modulus differs from the scheme's")
    value = hash_core(
        params.field.p, m.values(), k1.value, params.lead_exponent(m.length)
    )
    return params.field.element(value)


def sign(params: MacParams, key: KeyPair, m: Message) -> Tag:
    """Compute the tag: polynomial hash under k1, masked by k2."""
    if key.field != params.field:
        raise ValueError("key modulus differs from the scheme's")
    return Tag(polynomial_hash(params, m, key.k1) + key.k2)


def verify(params: MacParams, key: KeyPair, m: Message, t: Tag) -> VerifyResult:
    """Accept exactly when the tag matches a fresh signature of m."""
    if sign(params, key, m) == t:
        return VerifyResult.ACCEPT
    return VerifyResult.REJECT


def iter_messages(params: MacParams, max_len: int | None = None) -> Iterator[Message]:
    """All messages up to max_len (default: the scheme maximum), shortest
    first, lexicographic within each length."""
    limit = params.max_len if max_len is None else max_len
    if not 1 <= limit <= params.max_len:
        raise ValueError(f"max_len must be in [1, {params.max_len}], got {limit}")
    for length in range(1, limit + 1):
        for values in product(range(params.field.p), repeat=length):
            yield params.message(values)
