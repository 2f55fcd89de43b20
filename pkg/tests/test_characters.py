import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gapsums import characters as ch
from gapsums.modring import divisors, factorize


def brute_conductor(chi):
    """Smallest d | q with chi(a) = 1 for every unit a = 1 (mod d)."""
    q = chi.q
    units = [a for a in range(q) if math.gcd(a, q) == 1]
    for d in divisors(q):
        if all(abs(chi(a) - 1) < 1e-9 for a in units if a % d == 1 % d):
            return d
    raise AssertionError("unreachable")


def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@pytest.mark.parametrize("q", list(range(1, 41)) + [64, 72, 81, 96, 100])
def test_conductor_matches_brute_force(q):
    for chi in ch.enumerate_characters(q):
        assert chi.conductor == brute_conductor(chi), chi.label


@pytest.mark.parametrize("q", [1, 5, 8, 12, 15, 16, 21, 27])
def test_characters_are_multiplicative_and_periodic(q):
    chars = ch.enumerate_characters(q)
    assert len(chars) == factorize(q).phi
    assert len({c.exponents for c in chars}) == len(chars)
    for chi in chars:
        for a in range(q):
            assert chi(a + q) == pytest.approx(chi(a))
            for b in range(q):
                assert chi(a * b) == pytest.approx(chi(a) * chi(b))
            if math.gcd(a, q) != 1:
                assert chi(a) == 0


@pytest.mark.parametrize("q", [7, 12, 20, 24])
def test_orthogonality(q):
    chars = ch.enumerate_characters(q)
    phi = len(chars)
    for a in range(q):
        total = sum(chi(a) for chi in chars)
        expected = phi if a % q == 1 % q else 0
        assert total == pytest.approx(expected, abs=1e-9)


def test_enumeration_order_principal_first():
    chars = ch.enumerate_characters(15)
    assert chars[0].is_principal
    assert [c.exponents for c in chars] == sorted(c.exponents for c in chars)


def test_q12_has_one_primitive_character():
    prim = ch.primitive_characters(12)
    assert len(ch.enumerate_characters(12)) == 4
    assert len(prim) == 1


def test_q8_conductors():
    assert [c.conductor for c in ch.enumerate_characters(8)] == [1, 8, 4, 8]


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 101])
def test_quadratic_character_is_legendre(p):
    chi = ch.quadratic_character(p)
    assert chi.order == 2
    assert chi.is_primitive
    for a in range(p):
        assert chi(a) == pytest.approx(legendre(a, p))


def test_legendre_mod7_at_3():
    assert ch.quadratic_character(7)(3) == pytest.approx(-1)


def test_gauss_sum_legendre_mod5():
    chi = ch.quadratic_character(5)
    assert ch.gauss_sum(chi) == pytest.approx(math.sqrt(5))
    assert ch.char_fourier(chi, 2) == pytest.approx(-math.sqrt(5))


def test_gauss_sum_principal_mod4_vanishes():
    assert abs(ch.gauss_sum(ch.principal_character(4))) < 1e-12


def test_gauss_sum_direct_definition():
    for chi in ch.enumerate_characters(21):
        direct = sum(chi(a) * cmath.exp(2j * math.pi * a / 21) for a in range(21))
        assert ch.gauss_sum(chi) == pytest.approx(direct, abs=1e-9)


@pytest.mark.parametrize("q", [9, 16, 25, 35, 40])
def test_fourier_identity_primitive(q):
    for chi in ch.primitive_characters(q):
        fhat = ch.char_fourier_all(chi)
        for b in range(q):
            assert abs(fhat[b] - ch.gauss_identity_rhs(chi, b)) < 1e-9


def test_primitive_count_matches_mobius():
    for q in range(1, 100):
        assert len(ch.primitive_characters(q)) == ch.primitive_count(q)


def test_no_primitive_characters_for_q_2_mod_4():
    for q in (2, 6, 10, 14, 30):
        assert ch.primitive_characters(q) == []


def test_conj_and_parity():
    for chi in ch.enumerate_characters(13):
        conj = chi.conj()
        assert np.allclose(conj.values, np.conj(chi.values))
        assert chi.is_even == (chi(-1) == pytest.approx(1))


@given(st.integers(1, 120), st.data())
@settings(max_examples=60, deadline=None)
def test_json_roundtrip(q, data):
    chars = ch.enumerate_characters(q)
    chi = data.draw(st.sampled_from(chars))
    back = ch.DirichletCharacter.from_json(chi.to_json())
    assert back == chi
    assert back.conductor == chi.conductor
    assert chi.to_json()["q"] == q


def test_exponents_reduced():
    chi = ch.DirichletCharacter.from_exponents(7, (8,))
    assert chi.exponents == (2,)
