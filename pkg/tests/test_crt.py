import random
from math import prod

import pytest
from hypothesis import given, strategies as st

from modrecon.arith import Residue, take_primes
from modrecon.crt import ResidueSystem, crt_list, crt_pair, crt_vector
from modrecon.errors import EmptyInput, LengthMismatch, ModuliNotCoprime


def test_crt_pair_examples():
    r = crt_pair(Residue(3, 5), Residue(4, 7))
    assert r == Residue(18, 35)
    assert r.value % 5 == 3 and r.value % 7 == 4
    assert crt_pair(Residue(0, 5), Residue(0, 7)) == Residue(0, 35)
    with pytest.raises(ModuliNotCoprime):
        crt_pair(Residue(2, 4), Residue(1, 6))


def test_crt_list_examples():
    assert crt_list([Residue(0, 5), Residue(2, 7), Residue(85, 101)]) == Residue(590, 3535)
    assert crt_list([Residue(1, 5), Residue(2, 7), Residue(85, 101)]) == Residue(2711, 3535)
    assert crt_list([Residue(3, 5)]) == Residue(3, 5)
    with pytest.raises(EmptyInput):
        crt_list([])
    with pytest.raises(ModuliNotCoprime):
        ResidueSystem([Residue(1, 6), Residue(1, 35), Residue(1, 10)])


def test_crt_vector_examples():
    assert crt_vector([(5, [3, 0]), (7, [4, 0])]) == [Residue(18, 35), Residue(0, 35)]
    assert crt_vector([(11, [1, 2, 10])]) == [Residue(1, 11), Residue(2, 11), Residue(10, 11)]
    with pytest.raises(LengthMismatch):
        crt_vector([(5, [1, 2]), (7, [1])])
    with pytest.raises(ModuliNotCoprime):
        crt_vector([(5, [1]), (5, [1])])


@pytest.mark.parametrize("moduli", [[9, 11, 13, 7], [16, 625], [4, 3, 5, 7, 11], [9973]])
def test_round_trip_exhaustive(moduli):
    n = prod(moduli)
    assert n <= 10**4
    for x in range(n):
        assert crt_list([Residue(x, m) for m in moduli]) == Residue(x, n)


def test_round_trip_256_bit():
    rng = random.Random(7)
    for _ in range(1000):
        moduli = take_primes(4, 64, seed=rng.randrange(10**6))
        n = prod(moduli)
        x = rng.randrange(n)
        assert crt_list([Residue(x, m) for m in moduli]) == Residue(x, n)


@given(st.permutations([5, 7, 11, 13, 17, 19]), st.integers(0, 5 * 7 * 11 * 13 * 17 * 19 - 1))
def test_crt_list_permutation_invariant(moduli, x):
    entries = [Residue(x, m) for m in moduli]
    assert crt_list(entries) == crt_list(sorted(entries, key=lambda r: r.modulus))
