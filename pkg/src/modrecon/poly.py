"""Sparse multivariate polynomials over Q or Z/p.

A monomial is a tuple of exponents, one per ring variable.  A polynomial
keeps its terms as a tuple of ``(monomial, coefficient)`` pairs sorted
strictly descending in the ring's monomial ordering, so the lead term is
always ``terms[0]``.  Coefficients are :class:`~fractions.Fraction` over Q and
ints in ``[0, p)`` over Z/p.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Iterable, NamedTuple

from .arith import format_rational, mod_inverse
from .errors import FieldMismatch, LengthMismatch, PolySyntaxError, UnknownVariable, ZeroPolynomial

__all__ = [
    "ORDERS",
    "Monomial",
    "Ring",
    "Polynomial",
    "compare",
    "monomial_key",
    "mono_mul",
    "mono_div",
    "mono_lcm",
    "mono_divides",
    "make_monic",
    "parse_poly",
    "format_monomial",
    "primitive_integer_terms",
    "reduce_mod_p",
    "ModPImage",
    "homogenize",
    "parse_ideal",
    "format_ideal",
]

Monomial = tuple[int, ...]

ORDERS = ("lex", "deglex", "degrevlex")


def _key_lex(m):
    return m


def _key_deglex(m):
    return (sum(m),) + m


def _key_degrevlex(m):
    return (sum(m),) + tuple(-e for e in reversed(m))


_KEYS = {"lex": _key_lex, "deglex": _key_deglex, "degrevlex": _key_degrevlex}


def monomial_key(order: str) -> Callable[[Monomial], tuple]:
    """Sort key under which tuple comparison agrees with the monomial ordering."""
    try:
        return _KEYS[order]
    except KeyError:
        raise ValueError(f"unknown monomial ordering {order!r}; expected one of {ORDERS}") from None


def compare(m1: Monomial, m2: Monomial, order: str) -> int:
    """Return -1, 0 or 1 as m1 is smaller than, equal to or greater than m2."""
    if len(m1) != len(m2):
        raise LengthMismatch(f"monomials of different length: {m1}, {m2}")
    key = monomial_key(order)
    k1, k2 = key(m1), key(m2)
    return (k1 > k2) - (k1 < k2)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


@dataclass(frozen=True)
class Ring:
    """Polynomial ring: variable names, monomial ordering, coefficient field.

    ``modulus=None`` means Q; otherwise coefficients live in Z/modulus and the
    modulus is assumed prime.
    """

    variables: tuple[str, ...]
    order: str = "degrevlex"
    modulus: int | None = None
    key: Callable = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")
        object.__setattr__(self, "key", monomial_key(self.order))

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def field_name(self) -> str:
        return "Q" if self.modulus is None else f"Z/{self.modulus}"

    def with_modulus(self, p: int | None) -> Ring:
        return Ring(self.variables, self.order, p)

    def with_order(self, order: str) -> Ring:
        return Ring(self.variables, order, self.modulus)

    def coerce(self, c):
        """Map an int or Fraction into the coefficient field."""
        p = self.modulus
        if p is None:
            return Fraction(c)
        if isinstance(c, int):
            return c % p
        c = Fraction(c)
        return c.numerator * mod_inverse(c.denominator, p).value % p

    def inverse(self, c):
        if self.modulus is None:
            return 1 / c
        return pow(c, -1, self.modulus)

    def one_monomial(self) -> Monomial:
        return (0,) * self.nvars

    def gen(self, name: str) -> Polynomial:
        i = self.variables.index(name)
        m = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, ((m, self.coerce(1)),))

    def gens(self) -> list[Polynomial]:
        return [self.gen(v) for v in self.variables]

    def constant(self, c) -> Polynomial:
        c = self.coerce(c)
        return Polynomial(self, ((self.one_monomial(), c),) if c else ())

    def parse(self, text: str) -> Polynomial:
        return parse_poly(text, self)


class Polynomial:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Iterable[tuple[Monomial, object]] = ()):
        # `terms` must already be canonical: sorted descending, no zero coefficients
        self.ring = ring
        self.terms = tuple(terms)

    @classmethod
    def from_dict(cls, ring: Ring, coeffs: dict) -> Polynomial:
        p = ring.modulus
        if p is None:
            items = [(m, c) for m, c in coeffs.items() if c]
        else:
            items = [(m, c % p) for m, c in coeffs.items() if c % p]
        key = ring.key
        items.sort(key=lambda t: key(t[0]), reverse=True)
        return cls(ring, items)

    @classmethod
    def from_terms(cls, ring: Ring, terms: Iterable[tuple[Monomial, object]]) -> Polynomial:
        """Build from arbitrary (monomial, coefficient) pairs, combining duplicates."""
        acc: dict = {}
        for m, c in terms:
            acc[m] = acc.get(m, 0) + ring.coerce(c)
        return cls.from_dict(ring, acc)

    def as_dict(self) -> dict:
        return dict(self.terms)

    # lead data
    @property
    def lm(self) -> Monomial:
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no lead monomial")
        return self.terms[0][0]

    @property
    def lc(self):
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no lead coefficient")
        return self.terms[0][1]

    def monomials(self) -> list[Monomial]:
        return [m for m, _ in self.terms]

    def coefficients(self) -> list:
        return [c for _, c in self.terms]

    def total_degree(self) -> int:
        return max((sum(m) for m, _ in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m, _ in self.terms}) <= 1

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, self.terms))

    def _check(self, other):
        if other.ring is not self.ring and other.ring != self.ring:
            raise FieldMismatch(f"cannot combine polynomials over {self.ring} and {other.ring}")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.constant(other)
        self._check(other)
        acc = dict(self.terms)
        for m, c in other.terms:
            acc[m] = acc.get(m, 0) + c
        return Polynomial.from_dict(self.ring, acc)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.modulus
        if p is None:
            return Polynomial(self.ring, [(m, -c) for m, c in self.terms])
        return Polynomial(self.ring, [(m, (-c) % p) for m, c in self.terms])

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> Polynomial:
        c = self.ring.coerce(c)
        if not c:
            return Polynomial(self.ring)
        p = self.ring.modulus
        if p is None:
            return Polynomial(self.ring, [(m, a * c) for m, a in self.terms])
        return Polynomial(self.ring, [(m, a * c % p) for m, a in self.terms])

    def mul_term(self, mono: Monomial, c) -> Polynomial:
        """Multiply by the single term c * mono (order is preserved)."""
        if not c:
            return Polynomial(self.ring)
        p = self.ring.modulus
        if p is None:
            return Polynomial(self.ring, [(mono_mul(m, mono), a * c) for m, a in self.terms])
        return Polynomial(self.ring, [(mono_mul(m, mono), a * c % p) for m, a in self.terms])

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        acc: dict = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = mono_mul(m1, m2)
                acc[m] = acc.get(m, 0) + c1 * c2
        return Polynomial.from_dict(self.ring, acc)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        result = self.ring.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def monic(self) -> Polynomial:
        return make_monic(self)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r}, {self.ring.field_name}, {self.ring.order})"


def make_monic(f: Polynomial) -> Polynomial:
    if not f:
        raise ZeroPolynomial("cannot make the zero polynomial monic")
    return f.scale(f.ring.inverse(f.lc))


# printing

def format_monomial(m: Monomial, variables) -> str:
    parts = []
    for v, e in zip(variables, m):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts) if parts else "1"


def format_poly(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    variables = f.ring.variables
    out = []
    for i, (m, c) in enumerate(f.terms):
        neg = c < 0
        mag = -c if neg else c
        if any(m):
            mono = format_monomial(m, variables)
            body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
        else:
            body = format_rational(mag)
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


# parsing

_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^]))")


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise PolySyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, ring):
        self.text = text
        self.ring = ring
        self.index = {v: i for i, v in enumerate(ring.variables)}
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return PolySyntaxError(message, self.text, tok[2])

    def expect_number(self):
        kind, value, _ = self.peek()
        if kind != "num":
            raise self.error("expected an integer")
        self.take()
        return int(value)

    def parse(self):
        terms = []
        sign = 1
        kind, value, _ = self.peek()
        if kind == "op" and value in "+-":
            sign = -1 if value == "-" else 1
            self.take()
        terms.append(self.term(sign))
        while True:
            kind, value, _ = self.peek()
            if kind == "end":
                break
            if kind == "op" and value in "+-":
                self.take()
                terms.append(self.term(-1 if value == "-" else 1))
            else:
                raise self.error("expected '+' or '-'")
        return Polynomial.from_terms(self.ring, terms)

    def term(self, sign):
        coeff = Fraction(sign)
        kind, value, _ = self.peek()
        has_coeff = False
        if kind == "num":
            num = self.expect_number()
            den = 1
            if self.peek()[:2] == ("op", "/"):
                self.take()
                den = self.expect_number()
                if den == 0:
                    raise self.error("zero denominator")
            coeff *= Fraction(num, den)
            has_coeff = True
            if self.peek()[:2] == ("op", "*"):
                self.take()
                if self.peek()[0] != "ident":
                    raise self.error("expected a variable after '*'")
        exps = [0] * self.ring.nvars
        if self.peek()[0] == "ident":
            self.factor(exps)
            while self.peek()[:2] == ("op", "*"):
                self.take()
                self.factor(exps)
        elif not has_coeff:
            raise self.error("expected a term")
        return tuple(exps), coeff

    def factor(self, exps):
        tok = self.peek()
        kind, name, _ = tok
        if kind != "ident":
            raise self.error("expected a variable")
        if name not in self.index:
            raise UnknownVariable(f"unknown variable {name!r}", self.text, tok[2])
        self.take()
        e = 1
        if self.peek()[:2] == ("op", "^"):
            self.take()
            e = self.expect_number()
        exps[self.index[name]] += e


def parse_poly(text: str, ring: Ring) -> Polynomial:
    """Parse e.g. ``"3/2*x^2*y - y + 7"``.

    Terms are joined by ``+``/``-``; a term is an optional integer or
    ``num/den`` coefficient, an optional ``*``, then ``*``-separated
    ``var`` or ``var^exp`` factors.  Whitespace is ignored.
    """
    return _Parser(text, ring).parse()


# reduction modulo p

def primitive_integer_terms(f: Polynomial) -> list[tuple[Monomial, int]]:
    """Scale f over Q to a primitive integer polynomial with positive lead coefficient."""
    if f.ring.modulus is not None:
        raise FieldMismatch("primitive scaling needs a polynomial over Q")
    if not f:
        return []
    den = lcm(*(c.denominator for _, c in f.terms))
    ints = [(m, int(c * den)) for m, c in f.terms]
    content = gcd(*(c for _, c in ints))
    if ints[0][1] < 0:
        content = -content
    return [(m, c // content) for m, c in ints]


class ModPImage(NamedTuple):
    poly: Polynomial
    bad_prime: bool  # p divides the primitive lead coefficient, so the lead monomial changed


def reduce_mod_p(f: Polynomial, p: int) -> ModPImage:
    """Image of f in Z/p[X] after scaling f to a primitive integer polynomial."""
    ints = primitive_integer_terms(f)
    ring = f.ring.with_modulus(p)
    terms = [(m, c % p) for m, c in ints if c % p]
    if ints:
        assert terms, "a primitive polynomial cannot vanish modulo p"
    bad = bool(ints) and ints[0][1] % p == 0
    return ModPImage(Polynomial(ring, terms), bad)


def homogenize(polys: Iterable[Polynomial], var: str = "h") -> list[Polynomial]:
    """Homogenize with a new last variable, keeping field and ordering."""
    polys = list(polys)
    if not polys:
        return []
    ring = polys[0].ring
    new_ring = Ring(ring.variables + (var,), ring.order, ring.modulus)
    out = []
    for f in polys:
        d = f.total_degree()
        out.append(Polynomial.from_dict(new_ring, {m + (d - sum(m),): c for m, c in f.terms}))
    return out


# ideal files

_HEADER_RE = re.compile(r"^\s*ring\s*:", re.IGNORECASE)


def parse_field(text: str) -> int | None:
    t = text.strip()
    if t.upper() in ("Q", "QQ"):
        return None
    m = re.fullmatch(r"(?:Z/|GF\(|F_?)?(\d+)\)?", t, re.IGNORECASE)
    if not m:
        raise ValueError(f"unrecognized field {text!r}")
    return int(m.group(1))


def parse_header(line: str) -> Ring:
    fields = {}
    for part in line.split(";"):
        if not part.strip():
            continue
        key, sep, value = part.partition(":")
        if not sep:
            raise ValueError(f"malformed header entry {part!r}")
        fields[key.strip().lower()] = value.strip()
    if "ring" not in fields:
        raise ValueError("header has no 'ring' entry")
    variables = tuple(v.strip() for v in fields["ring"].split(",") if v.strip())
    return Ring(variables, fields.get("order", "degrevlex"), parse_field(fields.get("field", "Q")))


def parse_ideal(text: str, order: str | None = None) -> tuple[Ring | None, list[Polynomial]]:
    """Parse an ideal file: a ``ring: ...; order: ...; field: ...`` header
    line followed by one polynomial per line.  Blank lines and ``#`` comments
    are skipped.  A file with no content yields ``(None, [])``.  `order`
    overrides the ordering named in the header."""
    ring = None
    polys = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ring is None:
            if not _HEADER_RE.match(line):
                raise PolySyntaxError(f"line {lineno}: expected a 'ring:' header", line, 0)
            ring = parse_header(line)
            if order is not None:
                ring = ring.with_order(order)
            continue
        f = parse_poly(line, ring)
        if f:
            polys.append(f)
    return ring, polys


def format_ideal(ring: Ring | None, polys: Iterable[Polynomial]) -> str:
    if ring is None:
        return ""
    lines = [f"ring: {','.join(ring.variables)}; order: {ring.order}; field: {ring.field_name}"]
    lines.extend(str(f) for f in polys)
    return "\n".join(lines) + "\n"
