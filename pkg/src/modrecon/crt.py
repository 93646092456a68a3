"""Chinese remainder lifting of residues and residue vectors."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod
from typing import Iterable, Sequence

from .arith import Residue, mod_inverse
from .errors import EmptyInput, LengthMismatch, ModuliNotCoprime

__all__ = ["ResidueSystem", "crt_pair", "crt_list", "crt_vector"]


def _check_coprime(moduli):
    for i, m in enumerate(moduli):
        for n in moduli[i + 1:]:
            if gcd(m, n) != 1:
                raise ModuliNotCoprime(f"moduli {m} and {n} share the factor {gcd(m, n)}")


@dataclass(frozen=True)
class ResidueSystem:
    """Residues with pairwise coprime moduli, validated on construction."""

    entries: tuple[Residue, ...]

    def __init__(self, entries: Iterable[Residue]):
        entries = tuple(entries)
        _check_coprime([r.modulus for r in entries])
        object.__setattr__(self, "entries", entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def modulus(self) -> int:
        return prod(r.modulus for r in self.entries)


def crt_pair(a: Residue, b: Residue) -> Residue:
    """Combine x = a (mod m) and x = b (mod n) into x mod m*n."""
    m, n = a.modulus, b.modulus
    if gcd(m, n) != 1:
        raise ModuliNotCoprime(f"moduli {m} and {n} share the factor {gcd(m, n)}")
    # x = a + m*k with k = (b - a) * m^-1 mod n
    k = (b.value - a.value) * mod_inverse(m, n).value % n
    return Residue(a.value + m * k, m * n)


def crt_list(entries: ResidueSystem | Sequence[Residue]) -> Residue:
    if not isinstance(entries, ResidueSystem):
        entries = ResidueSystem(entries)
    if not len(entries):
        raise EmptyInput("crt_list needs at least one residue")
    it = iter(entries)
    acc = next(it)
    for r in it:
        acc = crt_pair(acc, r)
    return acc


def crt_vector(columns: Sequence[tuple[int, Sequence[int | Residue]]]) -> list[Residue]:
    """Lift vectors known modulo distinct primes position by position.

    `columns` holds one (prime, vector) pair per prime; vector entries may be
    plain ints or Residues modulo that prime.
    """
    if not columns:
        raise EmptyInput("crt_vector needs at least one column")
    length = len(columns[0][1])
    for p, vec in columns:
        if len(vec) != length:
            raise LengthMismatch(f"vector for {p} has length {len(vec)}, expected {length}")
    _check_coprime([p for p, _ in columns])
    out = []
    for i in range(length):
        acc = None
        for p, vec in columns:
            v = vec[i]
            r = Residue(v.value if isinstance(v, Residue) else v, p)
            acc = r if acc is None else crt_pair(acc, r)
        out.append(acc)
    return out
