"""Buchberger's algorithm and reduced Groebner bases over Q and Z/p."""
from __future__ import annotations

import heapq
from typing import Iterable, NamedTuple, Sequence

from .errors import FieldMismatch, ZeroPolynomial
from .poly import (
    Monomial,
    Polynomial,
    Ring,
    format_monomial,
    make_monic,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    reduce_mod_p,
)

__all__ = [
    "PolyBasis",
    "LeadIdealSignature",
    "s_poly",
    "normal_form",
    "buchberger",
    "is_groebner_basis",
    "lead_signature",
    "format_signature",
    "sort_basis",
    "LMEquivalence",
    "check_lm_equivalence",
]

# A basis is a plain list of nonzero polynomials over one ring.
PolyBasis = list[Polynomial]
# Lead monomials of a reduced basis, sorted descending in the ring's ordering.
LeadIdealSignature = tuple[Monomial, ...]


def s_poly(f: Polynomial, g: Polynomial) -> Polynomial:
    if not f or not g:
        raise ZeroPolynomial("S-polynomial of a zero polynomial")
    if f.ring != g.ring:
        raise FieldMismatch("S-polynomial of polynomials over different rings")
    ring = f.ring
    top = mono_lcm(f.lm, g.lm)
    return (f.mul_term(mono_div(top, f.lm), ring.inverse(f.lc))
            - g.mul_term(mono_div(top, g.lm), ring.inverse(g.lc)))


def normal_form(f: Polynomial, G: Sequence[Polynomial]) -> Polynomial:
    """Fully reduce f by G; at every step the first divisor in basis order is used."""
    ring = f.ring
    p = ring.modulus
    key = ring.key
    divisors = [(g.lm, ring.inverse(g.lc), g.terms[1:]) for g in G if g]

    def heap_key(m):
        return tuple(-k for k in key(m))

    work = dict(f.terms)
    heap = [(heap_key(m), m) for m in work]
    heapq.heapify(heap)
    remainder = []
    while heap:
        _, m = heapq.heappop(heap)
        c = work.pop(m, None)
        if c is None:
            continue
        for lm, inv, tail in divisors:
            if mono_divides(lm, m):
                factor = c * inv if p is None else c * inv % p
                shift = mono_div(m, lm)
                for gm, gc in tail:
                    nm = mono_mul(gm, shift)
                    old = work.get(nm)
                    if old is None:
                        heapq.heappush(heap, (heap_key(nm), nm))
                        old = 0
                    new = old - factor * gc
                    if p is not None:
                        new %= p
                    if new:
                        work[nm] = new
                    else:
                        work.pop(nm, None)
                break
        else:
            remainder.append((m, c))
    return Polynomial(ring, remainder)


def _pair_key(G, pair):
    i, j = pair
    top = mono_lcm(G[i].lm, G[j].lm)
    return (sum(top), top, i, j)


def _chain_criterion(G, B, i, j, top):
    for k in range(len(G)):
        if k == i or k == j:
            continue
        if (min(i, k), max(i, k)) in B or (min(j, k), max(j, k)) in B:
            continue
        if mono_divides(G[k].lm, top):
            return True
    return False


def sort_basis(G: Iterable[Polynomial]) -> PolyBasis:
    G = list(G)
    if not G:
        return G
    key = G[0].ring.key
    return sorted(G, key=lambda g: key(g.lm), reverse=True)


def _reduce_basis(G):
    # drop generators whose lead monomial is divisible by another one
    G = sort_basis(G)
    minimal = []
    for g in reversed(G):  # ascending, so smaller leads survive
        if not any(mono_divides(h.lm, g.lm) for h in minimal):
            minimal.append(g)
    minimal = sort_basis(minimal)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        tail = normal_form(Polynomial(g.ring, g.terms[1:]), others)
        reduced.append(make_monic(Polynomial(g.ring, (g.terms[0],) + tail.terms)))
    return reduced


def buchberger(F: Iterable[Polynomial]) -> PolyBasis:
    """Reduced Groebner basis of the ideal generated by F.

    Pairs are processed by smallest lcm degree, ties broken by the lcm's
    exponent tuple.  Buchberger's product and chain criteria prune pairs.
    The result is monic, auto-reduced and sorted by lead monomial, descending.
    """
    G = [make_monic(f) for f in F if f]
    if not G:
        return []
    rings = {g.ring for g in G}
    if len(rings) > 1:
        raise FieldMismatch("generators live in different rings")
    B = {(i, j) for j in range(len(G)) for i in range(j)}
    while B:
        pair = min(B, key=lambda pr: _pair_key(G, pr))
        B.discard(pair)
        i, j = pair
        top = mono_lcm(G[i].lm, G[j].lm)
        if top == mono_mul(G[i].lm, G[j].lm):
            continue
        if _chain_criterion(G, B, i, j, top):
            continue
        h = normal_form(s_poly(G[i], G[j]), G)
        if h:
            G.append(make_monic(h))
            n = len(G) - 1
            B.update((k, n) for k in range(n))
    return _reduce_basis(G)


def is_groebner_basis(G: Sequence[Polynomial]) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    G = [g for g in G if g]
    for j in range(len(G)):
        for i in range(j):
            if mono_lcm(G[i].lm, G[j].lm) == mono_mul(G[i].lm, G[j].lm):
                continue
            if normal_form(s_poly(G[i], G[j]), G):
                return False
    return True


def lead_signature(G: Iterable[Polynomial]) -> LeadIdealSignature:
    G = sort_basis(G)
    return tuple(g.lm for g in G)


def format_signature(sig: LeadIdealSignature, ring: Ring) -> str:
    return "[" + ", ".join(format_monomial(m, ring.variables) for m in sig) + "]"


class LMEquivalence(NamedTuple):
    lm_equal: bool
    reductions_equal: bool
    input_flagged: bool  # p divides some primitive input lead coefficient


def check_lm_equivalence(F: Sequence[Polynomial], p: int) -> LMEquivalence:
    """Compare G(p) = GB of F mod p with G_p = GB over Q mapped to Z/p.

    Returns whether the lead monomial sets agree and whether the two bases
    agree outright.  For primitive homogeneous input the two answers should
    coincide.
    """
    images = [reduce_mod_p(f, p) for f in F]
    flagged = any(img.bad_prime for img in images)
    G = buchberger(F)
    G_mod = buchberger(img.poly for img in images)
    lm_equal = lead_signature(G) == lead_signature(G_mod)
    reduced = [reduce_mod_p(g, p) for g in G]
    if any(img.bad_prime for img in reduced):
        reductions_equal = False
    else:
        reductions_equal = sort_basis(make_monic(img.poly) for img in reduced) == G_mod
    return LMEquivalence(lm_equal, reductions_equal, flagged)
