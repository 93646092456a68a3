"""Integer and rational helpers: Bezout, inverses, residues, primes.

Python ints already are arbitrary precision, and rationals are
:class:`fractions.Fraction` (always reduced, positive denominator).
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import Exhausted, NotInvertible

__all__ = [
    "Residue",
    "ext_gcd",
    "mod_inverse",
    "is_prime",
    "prime_stream",
    "take_primes",
    "parse_int",
    "parse_rational",
    "format_rational",
]


@dataclass(frozen=True)
class Residue:
    """An element of Z/modulus, stored in the canonical range [0, modulus)."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")
        if not 0 <= self.value < self.modulus:
            object.__setattr__(self, "value", self.value % self.modulus)

    def __str__(self):
        return f"{self.value} mod {self.modulus}"

    @classmethod
    def of_rational(cls, q, modulus: int) -> Residue:
        q = Fraction(q)
        return cls(q.numerator * mod_inverse(q.denominator, modulus).value, modulus)


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, u, v) with g = gcd(a, b) >= 0 and u*a + v*b = g."""
    r0, r1 = a, b
    s0, s1 = 1, 0
    t0, t1 = 0, 1
    while r1 != 0:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0 < 0:
        r0, s0, t0 = -r0, -s0, -t0
    return r0, s0, t0


def mod_inverse(a: int, m: int) -> Residue:
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    g, u, _ = ext_gcd(a % m, m)
    if g != 1:
        raise NotInvertible(a, m)
    return Residue(u, m)


# Deterministic for n < 3.3e24 (covers every n < 2**64).
_FIXED_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_EXTRA_ROUNDS = 64  # 4**-64 = 2**-128


def _strong_probable_prime(n, d, s, a):
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin test.

    Exact for n < 2**64 (fixed witness set).  Above that, 64 extra
    pseudo-random bases (seeded by n, so the answer is reproducible) bound the
    error probability by 2**-128.
    """
    if n < 2:
        return False
    for p in _FIXED_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if not all(_strong_probable_prime(n, d, s, a) for a in _FIXED_WITNESSES):
        return False
    if n < 1 << 64:
        return True
    rng = random.Random(n)
    return all(_strong_probable_prime(n, d, s, rng.randrange(2, n - 1))
               for _ in range(_EXTRA_ROUNDS))


_SMALL_RANGE = 1 << 16


def prime_stream(bit_size: int, exclude: Iterable[int] = (), seed: int = 0) -> Iterator[int]:
    """Yield distinct primes p with p.bit_length() == bit_size, skipping `exclude`.

    The order is a pseudo-random permutation fixed by `seed`.  When the range
    has no primes left the generator raises :class:`Exhausted` instead of
    stopping quietly, so callers asking for a count never get fewer primes.
    """
    if bit_size < 2:
        raise ValueError("bit_size must be >= 2")
    excluded = set(exclude)
    lo, hi = 1 << (bit_size - 1), 1 << bit_size
    rng = random.Random(f"prime_stream:{bit_size}:{seed}")
    if hi - lo <= _SMALL_RANGE:
        pool = [n for n in range(lo, hi) if n not in excluded and is_prime(n)]
        rng.shuffle(pool)
        yield from pool
        raise Exhausted(f"no more {bit_size}-bit primes")
    seen = set()
    while True:
        n = rng.randrange(lo, hi) | 1
        if n in seen or n in excluded:
            continue
        seen.add(n)
        if is_prime(n):
            yield n


def take_primes(count: int, bit_size: int, exclude: Iterable[int] = (), seed: int = 0) -> list[int]:
    stream = prime_stream(bit_size, exclude, seed)
    return [next(stream) for _ in range(count)]


_INT_RE = re.compile(r"\s*([+-]?\d+)\s*\Z")
_RAT_RE = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?\Z")


def parse_int(text: str) -> int:
    m = _INT_RE.match(text)
    if not m:
        raise ValueError(f"not a decimal integer: {text!r}")
    return int(m.group(1))


def parse_rational(text: str) -> Fraction:
    """Parse "num" or "num/den" into a reduced Fraction."""
    m = _RAT_RE.match(text)
    if not m:
        raise ValueError(f"not a rational number: {text!r}")
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
