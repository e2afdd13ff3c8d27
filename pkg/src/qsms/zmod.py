"""Exact arithmetic in a prime field Z_d.

Every residue carries its modulus, so runs over different primes can coexist
in the same process; mixing moduli is an error, never a silent coercion.
"""
from __future__ import annotations

from dataclasses import dataclass

# Moduli must fit in a 64-bit machine word.
_MAX_MODULUS = 2**63 - 1


def is_prime(n: int) -> bool:
    """Trial-division primality test; moduli here are desk-scale."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class FieldElement:
    """A residue modulo a prime, normalized into [0, modulus-1]."""

    value: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 2 or self.modulus > _MAX_MODULUS:
            raise ValueError(f"modulus must be in [2, 2^63): got {self.modulus}")
        if not is_prime(self.modulus):
            raise ValueError(f"modulus {self.modulus} is not prime")
        object.__setattr__(self, "value", int(self.value) % self.modulus)

    def _require_same_modulus(self, other: "FieldElement") -> None:
        if self.modulus != other.modulus:
            raise ValueError(
                f"modulus mismatch: {self.modulus} vs {other.modulus}"
            )

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._require_same_modulus(other)
        return FieldElement(self.value + other.value, self.modulus)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._require_same_modulus(other)
        return FieldElement(self.value - other.value, self.modulus)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._require_same_modulus(other)
        return FieldElement(self.value * other.value, self.modulus)

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.value, self.modulus)

    def inv(self) -> "FieldElement":
        """Multiplicative inverse; pow(v, -1, d) runs extended Euclid."""
        if self.value == 0:
            raise ZeroDivisionError("no inverse of zero")
        return FieldElement(pow(self.value, -1, self.modulus), self.modulus)

    def __int__(self) -> int:
        return self.value


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inv()


def lagrange_coefficient(u: int, points: list[int], d: int) -> FieldElement:
    """Interpolation weight at x=0 for the u-th point of a qualified set.

    Computes the product of x_z / (x_z - x_u) over all other points z,
    entirely in Z_d. ``u`` is 1-based. Differences are normalized into
    [0, d-1] before inversion, so signed fractions like 1/(1-2) are fine.
    """
    if len(points) < 1:
        raise ValueError("need at least one evaluation point")
    residues = [p % d for p in points]
    if len(set(residues)) != len(residues):
        raise ValueError(f"duplicate evaluation points mod {d}: {points}")
    if any(r == 0 for r in residues):
        raise ValueError("evaluation points must be nonzero mod d")
    if not 1 <= u <= len(points):
        raise ValueError(f"index {u} out of range for {len(points)} points")
    x_u = FieldElement(points[u - 1], d)
    coeff = FieldElement(1, d)
    for z, p in enumerate(points, start=1):
        if z == u:
            continue
        x_z = FieldElement(p, d)
        coeff = coeff * x_z * (x_z - x_u).inv()
    return coeff


def smallest_valid_prime(n: int) -> int:
    """Smallest prime d with n <= d <= 2n (exists for every n >= 1)."""
    if n < 1:
        raise ValueError("player count must be >= 1")
    for candidate in range(max(n, 2), 2 * n + 1):
        if is_prime(candidate):
            return candidate
    raise AssertionError(f"no prime in [{n}, {2 * n}]")  # unreachable
