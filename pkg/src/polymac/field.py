"""Exact arithmetic in the integers modulo a small prime."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

# Largest supported modulus; keeps every product of two reduced values well
# inside 64 bits, so enumeration loops never hit big-integer arithmetic.
MAX_MODULUS = 2**31

# Witness set making Miller-Rabin deterministic for all n < 3.3e24 (> 2**64).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality check, valid for 1 <= n < 2**64."""
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n % w == 0:
            return n == w
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field of integers modulo a prime p, 2 <= p < 2**31."""

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise TypeError(f"modulus must be an integer, got {self.p!r}")
        if not 2 <= self.p < MAX_MODULUS:
            raise ValueError(f"modulus must be in [2, 2**31), got {self.p}")
        if not is_prime(self.p):
            raise ValueError(f"modulus must be prime, got {self.p}")

    def element(self, value: int) -> FieldElement:
        """The canonical representative of value mod p."""
        return FieldElement(value % self.p, self)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(0, self)

    @property
    def one(self) -> FieldElement:
        return FieldElement(1, self)

    def elements(self) -> Iterator[FieldElement]:
        """All field elements, in value order."""
        for v in range(self.p):
            yield FieldElement(v, self)


@dataclass(frozen=True)
class FieldElement:
    """An element of a PrimeField, always stored as a canonical residue."""

    value: int
    field: PrimeField

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", self.value % self.field.p)

    def _require_same_field(self, other: FieldElement) -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected a FieldElement, got {other!r}")
        if self.field != other.field:
            raise ValueError(
                f"mixed moduli: {self.field.p} and {other.field.p}"
            )

    def __add__(self, other: FieldElement) -> FieldElement:
        self._require_same_field(other)
        return FieldElement(self.value + other.value, self.field)

    def __sub__(self, other: FieldElement) -> FieldElement:
        self._require_same_field(other)
        return FieldElement(self.value - other.value, self.field)

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._require_same_field(other)
        return FieldElement(self.value * other.value, self.field)

    def __neg__(self) -> FieldElement:
        return FieldElement(-self.value, self.field)

    def __pow__(self, exponent: int) -> FieldElement:
        """Square-and-multiply power; 0**0 is 1 by convention."""
        if exponent < 0:
            raise ValueError(f"exponent must be non-negative, got {exponent}")
        return FieldElement(pow(self.value, exponent, self.field.p), self.field)

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.p})"
