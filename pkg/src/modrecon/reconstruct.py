"""Rational reconstruction from a residue modulo N.

Two routes are provided.  :func:`farey_preimage` is the classical bounded
half-extended Euclid.  :func:`error_tolerant` finds a shortest vector of the
lattice spanned by (N, 0) and (r, 1) with 2-D Gauss-Lagrange reduction; it
returns the right fraction even when a minority factor M of N carries wrong
residues, as long as (a^2 + b^2) * M stays below the good part N / M.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import NamedTuple

from .arith import Residue
from .errors import DivisionByZero

__all__ = [
    "LatticeBasis2",
    "ReductionStep",
    "ReconResult",
    "round_half_even",
    "farey_preimage",
    "gauss_lagrange",
    "gauss_lagrange_trace",
    "error_tolerant",
]

Vec = tuple[int, int]


class LatticeBasis2(NamedTuple):
    v1: Vec
    v2: Vec

    @classmethod
    def for_residue(cls, r: Residue) -> LatticeBasis2:
        return cls((r.modulus, 0), (r.value, 1))

    @property
    def determinant(self) -> int:
        return self.v1[0] * self.v2[1] - self.v1[1] * self.v2[0]


class ReductionStep(NamedTuple):
    """One division step: ``dividend = quotient * divisor + remainder``."""

    dividend: Vec
    quotient: int
    divisor: Vec
    remainder: Vec

    def __str__(self):
        return f"{self.dividend} = {self.quotient}*{self.divisor} + {self.remainder}"


@dataclass(frozen=True)
class ReconResult:
    value: Fraction
    vector: Vec          # shortest vector (x, y) before dividing out the gcd
    squared_norm: int
    reduced_by: int      # gcd(x, y)


def round_half_even(n: int, d: int) -> int:
    """Nearest integer to n/d, ties to even, in exact integer arithmetic."""
    if d < 0:
        n, d = -n, -d
    q, rem = divmod(n, d)
    twice = 2 * rem
    if twice > d or (twice == d and q % 2 == 1):
        q += 1
    return q


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def farey_preimage(r: Residue) -> Fraction | None:
    """Preimage of r under the N-Farey map, or None if r is not in its image.

    The domain is a/b in lowest terms with gcd(b, N) = 1 and
    |a|, |b| <= sqrt((N - 1) / 2).
    """
    n = r.modulus
    bound = isqrt((n - 1) // 2)
    r0, r1 = n, r.value
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    a, b = r1, t1
    if b == 0 or abs(b) > bound:
        return None
    if gcd(a, b) != 1 or gcd(b, n) != 1:
        return None
    return Fraction(a, b)


def gauss_lagrange_trace(basis: LatticeBasis2 | tuple[Vec, Vec]) -> tuple[Vec, list[ReductionStep]]:
    """Gauss-Lagrange reduction, returning a shortest vector and the steps taken.

    The longer vector is put first; then while it is strictly longer than the
    second one it is replaced by its remainder modulo the second, with the
    quotient rounded half-to-even.
    """
    a1, a2 = basis
    a1, a2 = tuple(a1), tuple(a2)
    if a1[0] * a2[1] - a1[1] * a2[0] == 0:
        raise ValueError("basis vectors are linearly dependent")
    if _dot(a1, a1) < _dot(a2, a2):
        a1, a2 = a2, a1
    steps = []
    n1, n2 = _dot(a1, a1), _dot(a2, a2)
    while n1 > n2:
        q = round_half_even(_dot(a1, a2), n2)
        rem = (a1[0] - q * a2[0], a1[1] - q * a2[1])
        steps.append(ReductionStep(a1, q, a2, rem))
        a1, a2 = a2, rem
        n1, n2 = n2, _dot(rem, rem)
    return a1, steps


def gauss_lagrange(basis: LatticeBasis2 | tuple[Vec, Vec]) -> Vec:
    return gauss_lagrange_trace(basis)[0]


def error_tolerant(r: Residue) -> ReconResult | None:
    """Reconstruct a fraction from r via a shortest vector of <(N,0), (r,1)>.

    Returns None when the shortest vector has squared norm >= N.
    """
    (x, y), _ = gauss_lagrange_trace(LatticeBasis2.for_residue(r))
    norm = x * x + y * y
    if norm >= r.modulus:
        return None
    if y == 0:
        # vectors with y == 0 are multiples of (N, 0), so this cannot pass the norm test
        raise DivisionByZero(f"shortest vector {(x, y)} has zero denominator")
    return ReconResult(Fraction(x, y), (x, y), norm, gcd(x, y))
