"""Field arithmetic, characters, and Gauss sums against brute oracles."""

import cmath
import math

import numpy as np
import pytest

from fqdist import (
    CompositeModulus,
    FieldElement,
    OrderDoesNotDivide,
    TrivialCharacter,
    char_fourier,
    gauss_sum,
    is_prime,
    make_field,
    mult_character,
    nth_power_roots,
)

from oracles import slow_gauss_sum

SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]


def test_is_prime_small():
    primes = {p for p in range(2, 100) if is_prime(p)}
    sieve = set()
    for p in range(2, 100):
        if all(p % k for k in range(2, p)):
            sieve.add(p)
    assert primes == sieve
    assert not is_prime(0) and not is_prime(1) and not is_prime(-7)


@pytest.mark.parametrize("q", [4, 6, 9, 15, 21, 49, 1])
def test_make_field_rejects_composites(q):
    with pytest.raises(CompositeModulus):
        make_field(q)


@pytest.mark.parametrize("q", SMALL_PRIMES)
def test_primitive_root_is_smallest(q):
    fld = make_field(q)
    for g in range(1, fld.g):
        assert len({pow(g, k, q) for k in range(q - 1)}) < q - 1
    assert len({pow(fld.g, k, q) for k in range(q - 1)}) == max(q - 1, 1)


def test_known_primitive_roots():
    assert make_field(7).g == 3
    assert make_field(13).g == 2
    assert make_field(19).g == 2
    assert make_field(31).g == 3


@pytest.mark.parametrize("q", SMALL_PRIMES)
def test_dlog_exp_inverse_tables(q):
    fld = make_field(q)
    for s in range(1, q):
        assert fld.exp[fld.dlog[s]] == s
        assert s * fld.inv[s] % q == 1
    assert fld.dlog[0] == -1
    assert fld.inv[0] == 0


@pytest.mark.parametrize("q", SMALL_PRIMES)
def test_additive_character_table(q):
    fld = make_field(q)
    for t in range(q):
        expected = cmath.exp(2j * cmath.pi * t / q)
        assert abs(fld.add_char[t] - expected) < 1e-12
    assert abs(np.sum(fld.add_char)) < 1e-9


@pytest.mark.parametrize("q", [5, 7, 13])
def test_field_element_arithmetic(q):
    fld = make_field(q)
    for a in range(q):
        for b in range(q):
            x, y = FieldElement(fld, a), FieldElement(fld, b)
            assert int(x + y) == (a + b) % q
            assert int(x - y) == (a - b) % q
            assert int(x * y) == (a * b) % q
            if b:
                assert int(x / y) * b % q == a
    x = FieldElement(fld, 2)
    assert int(x ** (q - 1)) == 1
    assert int(x**0) == 1
    assert int(-x) == (q - 2) % q
    assert x == 2 and hash(x) == hash(2)
    with pytest.raises(ZeroDivisionError):
        FieldElement(fld, 0) ** (-1)


@pytest.mark.parametrize("q", [7, 13, 19, 31])
def test_mult_character_is_multiplicative(q):
    fld = make_field(q)
    for order in (2, 3, 6):
        if (q - 1) % order:
            continue
        psi = mult_character(fld, order)
        assert psi(0) == 0
        for a in range(1, q):
            assert abs(abs(psi(a)) - 1) < 1e-12
            for b in range(1, q):
                assert abs(psi(a * b % q) - psi(a) * psi(b)) < 1e-12
        vals = {round(psi(a).real, 9) + 1j * round(psi(a).imag, 9)
                for a in range(1, q)}
        assert len(vals) == order


def test_mult_character_rejects_bad_order():
    fld = make_field(7)
    with pytest.raises(OrderDoesNotDivide):
        mult_character(fld, 4)
    with pytest.raises(OrderDoesNotDivide):
        mult_character(fld, 5)


def test_character_exact_order():
    fld = make_field(13)
    assert mult_character(fld, 6, 1).exact_order == 6
    assert mult_character(fld, 6, 2).exact_order == 3
    assert mult_character(fld, 6, 3).exact_order == 2
    assert mult_character(fld, 6, 0).exact_order == 1
    assert mult_character(fld, 6, 0).is_trivial


def test_character_power_matches_index_scaling():
    fld = make_field(19)
    psi = mult_character(fld, 6, 1)
    for k in range(-6, 7):
        pk = psi.power(k)
        for a in range(1, 19):
            assert abs(pk(a) - psi(a) ** k) < 1e-10


@pytest.mark.parametrize("q", [7, 13, 19, 31])
def test_gauss_sum_modulus(q):
    fld = make_field(q)
    for order in (2, 3, 6):
        if (q - 1) % order:
            continue
        for index in range(1, order):
            psi = mult_character(fld, order, index)
            G = gauss_sum(psi)
            assert abs(abs(G) - math.sqrt(q)) < 1e-9
            slow = slow_gauss_sum(q, fld.g, order, index)
            assert abs(G - slow) < 1e-9


def test_quadratic_gauss_sum_is_positive_root():
    fld = make_field(13)
    G = gauss_sum(mult_character(fld, 2))
    assert abs(G - math.sqrt(13)) < 1e-10


def test_trivial_gauss_sum_warns():
    fld = make_field(7)
    with pytest.warns(TrivialCharacter):
        G = gauss_sum(mult_character(fld, 3, 0))
    assert abs(G - 6) < 1e-12


@pytest.mark.parametrize("q", [7, 13, 19])
def test_char_fourier_modulus(q):
    fld = make_field(q)
    for order in (2, 3):
        if (q - 1) % order:
            continue
        psi = mult_character(fld, order)
        for v in range(1, q):
            val = char_fourier(psi, v)
            assert abs(abs(val) - q**-0.5) < 1e-10
            slow = sum(psi(s) * fld.add_char[(-v * s) % q]
                       for s in range(1, q)) / q
            assert abs(val - slow) < 1e-10


def test_char_fourier_trivial_character():
    fld = make_field(11)
    psi = mult_character(fld, 5, 0)
    for v in range(1, 11):
        assert abs(char_fourier(psi, v) - (-1 / 11)) < 1e-12


@pytest.mark.parametrize("q", [7, 13, 19, 31])
def test_nth_power_roots_exhaustive(q):
    fld = make_field(q)
    for n in (2, 3, 4, 5, 6):
        for c in range(q):
            roots = nth_power_roots(fld, n, c)
            expected = sorted(x for x in range(q) if pow(x, n, q) == c)
            assert [int(r) for r in roots] == expected


def test_cube_roots_of_six_mod_seven():
    fld = make_field(7)
    assert {int(r) for r in nth_power_roots(fld, 3, 6)} == {3, 5, 6}


def test_field_caching_and_equality():
    assert make_field(13) is make_field(13)
    assert make_field(13) == make_field(13)
    assert make_field(13) != make_field(7)
    assert not make_field(7).add_char.flags.writeable
