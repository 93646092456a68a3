from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from modrecon.errors import FieldMismatch, LengthMismatch, PolySyntaxError, UnknownVariable, ZeroPolynomial
from modrecon.poly import (
    ORDERS,
    Polynomial,
    Ring,
    compare,
    format_ideal,
    homogenize,
    make_monic,
    mono_mul,
    parse_ideal,
    parse_poly,
    reduce_mod_p,
)

XYZ = Ring(("x", "y", "z"), "degrevlex")
LEX = Ring(("x", "y"), "lex")


def reference_compare(a, b, order):
    """Monomial comparison written straight from the textbook definitions."""
    if a == b:
        return 0
    if order in ("deglex", "degrevlex") and sum(a) != sum(b):
        return 1 if sum(a) > sum(b) else -1
    if order in ("lex", "deglex"):
        for x, y in zip(a, b):
            if x != y:
                return 1 if x > y else -1
    for x, y in zip(reversed(a), reversed(b)):
        if x != y:
            return 1 if x < y else -1
    raise AssertionError


monomials3 = st.tuples(*[st.integers(0, 4)] * 3)


def test_compare_examples():
    assert compare((1, 0), (0, 1), "lex") == 1
    assert compare((1, 0, 1), (0, 2, 0), "degrevlex") == -1
    for order in ORDERS:
        assert compare((2, 1, 0), (2, 1, 0), order) == 0
    with pytest.raises(LengthMismatch):
        compare((1,), (1, 0), "lex")


def test_compare_degree_two_against_reference():
    deg2 = [m for m in product(range(3), repeat=3) if sum(m) == 2]
    for order in ORDERS:
        for a in deg2:
            for b in deg2:
                assert compare(a, b, order) == reference_compare(a, b, order)
    # degrevlex on x, y, z: x^2 > xy > y^2 > xz > yz > z^2
    ranked = sorted(deg2, key=XYZ.key, reverse=True)
    assert ranked == [(2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2)]


@given(monomials3, monomials3, monomials3, st.sampled_from(ORDERS))
def test_compare_is_a_monomial_order(a, b, c, order):
    ab = compare(a, b, order)
    assert ab == reference_compare(a, b, order)
    assert compare(b, a, order) == -ab
    if ab >= 0 and compare(b, c, order) >= 0:
        assert compare(a, c, order) >= 0
    assert compare(mono_mul(a, c), mono_mul(b, c), order) == ab
    assert compare(a, (0, 0, 0), order) >= 0


def test_parse_examples():
    f = parse_poly("x^7*y^5 + x^2*y*z^9 + x*z^11 + y^3*z^9", XYZ)
    assert len(f) == 4
    with pytest.raises(UnknownVariable):
        parse_poly("x7y5 + x2yz9 + xz11 + y3z9", XYZ)
    assert not parse_poly("0", XYZ)
    with pytest.raises(PolySyntaxError) as err:
        parse_poly("x + + y", XYZ)
    assert err.value.pos == 4


@pytest.mark.parametrize("text", ["x +", "x ^", "2*", "3/0*x", "x y", "x $ y", "*x", "x^y", ""])
def test_parse_rejects(text):
    with pytest.raises(PolySyntaxError):
        parse_poly(text, XYZ)


def test_parse_forms():
    assert parse_poly("3/2*x^2*y - y + 7", XYZ) == parse_poly("7 - y + 3/2 x^2*y", XYZ)
    assert parse_poly("x*x*y", XYZ) == parse_poly("x^2*y", XYZ)
    assert parse_poly("-x + x", XYZ) == XYZ.constant(0)
    assert str(parse_poly("  -2/4*y*x  + 1 ", XYZ)) == "-1/2*x*y + 1"
    assert str(parse_poly("1/2*x + 3", XYZ.with_modulus(5))) == "3*x + 3"


def test_arith_examples():
    x, y = LEX.gens()
    assert (x + y) * (x - y) == parse_poly("x^2 - y^2", LEX)
    F2 = LEX.with_modulus(2)
    a, b = F2.gens()
    assert not ((a + b) + (a - b))
    assert make_monic(parse_poly("2*x + 4*y", LEX)) == parse_poly("x + 2*y", LEX)
    with pytest.raises(ZeroPolynomial):
        make_monic(LEX.constant(0))
    with pytest.raises(FieldMismatch):
        x + a


polys = st.lists(
    st.tuples(monomials3, st.fractions(min_value=-20, max_value=20, max_denominator=5)),
    max_size=5,
).map(lambda terms: Polynomial.from_terms(XYZ, terms))


@settings(max_examples=60)
@given(polys, polys, polys)
def test_ring_axioms(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f + g == g + f and f * g == g * f
    assert f - f == XYZ.constant(0)


@given(polys)
def test_print_parse_round_trip(f):
    assert parse_poly(str(f), XYZ) == f
    terms = f.monomials()
    assert all(compare(a, b, XYZ.order) == 1 for a, b in zip(terms, terms[1:]))


def test_reduce_mod_p_examples():
    img = reduce_mod_p(parse_poly("1/2*x + 3", LEX), 5)
    assert img.poly == parse_poly("x + 1", LEX.with_modulus(5)) and not img.bad_prime
    img = reduce_mod_p(parse_poly("x + 5*y", LEX), 5)
    assert img.poly == parse_poly("x", LEX.with_modulus(5)) and not img.bad_prime
    img = reduce_mod_p(parse_poly("5*x + y", LEX), 5)
    assert img.poly == parse_poly("y", LEX.with_modulus(5)) and img.bad_prime
    with pytest.raises(FieldMismatch):
        reduce_mod_p(img.poly, 5)


@settings(max_examples=60)
@given(polys, polys, st.sampled_from([2, 3, 5, 7, 101]))
def test_reduce_mod_p_is_multiplicative(f, g, p):
    rf, rg = reduce_mod_p(f, p), reduce_mod_p(g, p)
    if not f or not g or rf.bad_prime or rg.bad_prime:
        return
    lhs = reduce_mod_p(f * g, p).poly
    assert make_monic(lhs) == make_monic(rf.poly * rg.poly)


def test_homogenize():
    f, g = homogenize([parse_poly("x^2 + y - 1", LEX), parse_poly("x*y + 2", LEX)])
    assert f.ring.variables == ("x", "y", "h")
    assert str(f) == "x^2 + y*h - h^2" and f.is_homogeneous()
    assert str(g) == "x*y + 2*h^2"


def test_ideal_file_round_trip():
    text = "# comment\nring: x,y,z; order: lex; field: Q\n\nx^2 - 1/3*y\ny*z + 7  # trailing\n"
    ring, F = parse_ideal(text)
    assert ring == Ring(("x", "y", "z"), "lex") and len(F) == 2
    out = format_ideal(ring, F)
    assert out == "ring: x,y,z; order: lex; field: Q\nx^2 - 1/3*y\ny*z + 7\n"
    assert parse_ideal(out) == (ring, F)
    ring, F = parse_ideal(out, order="degrevlex")
    assert ring.order == "degrevlex"
    assert parse_ideal("") == (None, [])
    assert parse_ideal("ring: x; field: Z/7\n8*x")[1][0] == parse_poly("x", Ring(("x",), modulus=7))
    with pytest.raises(PolySyntaxError):
        parse_ideal("x + y\n")
    with pytest.raises(ValueError):
        parse_ideal("ring: x; order: grevlex\n")
