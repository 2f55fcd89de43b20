import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gapsums import sums as sm
from gapsums.characters import (
    enumerate_characters,
    gauss_sum,
    primitive_characters,
    principal_character,
    quadratic_character,
)
from gapsums.errors import ModulusMismatchError, PreconditionError
from gapsums.fourier import l1_norm
from gapsums.gap import Gap, enumerate_elements, random_proper_gap
from gapsums.modring import primes_up_to


def power_sum_eval(coeffs, n, q):
    return sum(c * n**k for k, c in enumerate(coeffs)) % q


def e(q, x):
    return cmath.exp(2j * math.pi * x / q)


def test_legendre7_on_123():
    rep = sm.character_sum_over_gap(quadratic_character(7), Gap.line(7, [1], [3], base=1))
    assert rep.sum_value == pytest.approx(1)
    assert rep.chain_bound is not None and rep.chain_holds()


def test_nonprincipal_full_line_vanishes():
    for chi in enumerate_characters(9)[1:]:
        assert abs(sm.character_sum_over_gap(chi, Gap.line(9, [1], [9])).sum_value) < 1e-9


def test_principal_sum_computed_chain_withheld():
    rep = sm.character_sum_over_gap(principal_character(5), Gap.line(5, [1], [2], base=1))
    assert rep.sum_value == pytest.approx(2)
    assert rep.chain_bound is None and rep.chain_holds()


def test_imprimitive_chain_withheld():
    chi = next(c for c in enumerate_characters(12) if not c.is_primitive and not c.is_principal)
    assert sm.character_sum_over_gap(chi, Gap.line(12, [1], [5])).chain_bound is None


def test_modulus_mismatch():
    with pytest.raises(ModulusMismatchError):
        sm.character_sum_over_gap(quadratic_character(5), Gap.line(7, [1], [3]))


def test_quadratic_polynomial_examples():
    h = sm.PolynomialModQ.monomial(5, 2)
    assert sm.poly_exp_sum_over_gap(h, Gap.line(5, [1], [5])).magnitude == pytest.approx(math.sqrt(5))
    # {0} is not a GAP (lengths >= 2), so it goes through the multiset evaluator
    assert sm.poly_sum_values(h, [0]) == pytest.approx(1)


def test_cubic_full_line_within_weil():
    h = sm.PolynomialModQ.monomial(7, 3)
    assert sm.poly_exp_sum_over_gap(h, Gap.line(7, [1], [7])).magnitude <= 2 * math.sqrt(7) + 1e-9


@pytest.mark.parametrize("coeffs,q", [((0, 0, 1), 2), ((1, 1), 7), ((0, 0, 0), 7), ((1, 2, 3), 9)])
def test_polynomial_validation(coeffs, q):
    with pytest.raises(PreconditionError):
        sm.PolynomialModQ(q, coeffs).validate()


def test_horner_matches_power_sums():
    rng = np.random.default_rng(5)
    for q in range(2, 101):
        for _ in range(3):
            coeffs = tuple(int(c) for c in rng.integers(0, q, size=int(rng.integers(1, 7))))
            h = sm.PolynomialModQ(q, coeffs)
            vals = h.values()
            for n in range(q):
                assert vals[n] == power_sum_eval(coeffs, n, q) == h(n)


def test_weil_examples():
    r2 = sm.weil_complete_sum_check(sm.PolynomialModQ.monomial(7, 2))
    assert r2.max_magnitude == pytest.approx(math.sqrt(7)) and r2.ok
    r3 = sm.weil_complete_sum_check(sm.PolynomialModQ.monomial(7, 3))
    assert r3.max_magnitude <= 2 * math.sqrt(7) + 1e-9 and r3.ok
    r = sm.weil_complete_sum_check(sm.PolynomialModQ.monomial(3, 2))
    assert r.max_magnitude == pytest.approx(math.sqrt(3))


def test_weil_quadratic_all_shifts_equal_sqrt_q():
    mags = np.abs(sm.poly_fourier_all(sm.PolynomialModQ.monomial(7, 2)))
    assert np.allclose(mags, math.sqrt(7))


def test_poly_fourier_direct():
    h = sm.PolynomialModQ(11, (3, 1, 4, 1, 5))
    fhat = sm.poly_fourier_all(h)
    for b in range(11):
        assert fhat[b] == pytest.approx(sum(e(11, h(a) + b * a) for a in range(11)), abs=1e-9)


@given(st.sampled_from(primes_up_to(50)[1:]), st.data())
@settings(max_examples=80, deadline=None)
def test_weil_batch_ignores_low_coefficients(q, data):
    d = data.draw(st.integers(2, min(5, q - 1)))
    top = [data.draw(st.integers(0, q - 1)) for _ in range(d - 2)] + [data.draw(st.integers(1, q - 1))]
    c0, c1 = data.draw(st.integers(0, q - 1)), data.draw(st.integers(0, q - 1))
    h = sm.PolynomialModQ(q, (c0, c1, *top))
    batch = sm.weil_max_batch(q, np.array([top]))[0]
    assert batch == pytest.approx(sm.weil_complete_sum_check(h).max_magnitude, abs=1e-9)


def test_multilinear_example():
    gap = Gap(5, (1, 1), ((1, 1),), (2,))
    rep = sm.multilinear_character_sum(quadratic_character(5), gap)
    assert rep.sum_value == pytest.approx(2)
    assert rep.chain_holds()


def test_multilinear_s1_matches_character_sum():
    for chi in enumerate_characters(11):
        gap = Gap.line(11, [3, 1], [3, 2], base=4)
        a = sm.multilinear_character_sum(chi, gap)
        b = sm.character_sum_over_gap(chi, gap)
        assert a.sum_value == pytest.approx(b.sum_value)


def test_multilinear_zero_coordinate():
    gap = Gap(7, (0, 3), ((0, 1),), (4,))
    assert abs(sm.multilinear_character_sum(quadratic_character(7), gap).sum_value) < 1e-12


@pytest.mark.parametrize("q", [5, 7, 9, 12, 13, 16, 21, 25, 29])
def test_multilinear_fourier_identity(q):
    for chi in primitive_characters(q):
        fhat = sm.multilinear_fourier_all(chi)
        conj = np.conj(chi.values)
        assert np.abs(fhat - gauss_sum(chi) ** 2 * np.outer(conj, conj)).max() < 1e-6


def test_completion_examples():
    g = Gap.line(5, [1], [3])
    assert sm.completion_bound(math.sqrt(5), g) == pytest.approx(3.3416, abs=1e-4)
    assert sm.completion_bound(0.0, g) == 0
    assert sm.completion_bound(math.sqrt(13), Gap.line(13, [1], [13])) == pytest.approx(math.sqrt(13))


@given(st.sampled_from([5, 7, 8, 9, 11, 13, 16, 25, 27]), st.integers(1, 2), st.integers(0, 10**6))
@settings(max_examples=80, deadline=None)
def test_chain_holds_on_random_gaps(q, r, seed):
    gap = random_proper_gap(q, 1, r, (2, q), seed=seed)
    l1 = l1_norm(gap)
    for chi in primitive_characters(q):
        rep = sm.character_sum_over_gap(chi, gap, l1)
        assert rep.magnitude <= rep.chain_bound + 1e-9
        # the chain also holds for the raw multiset sum over enumerated points
        pts = enumerate_elements(gap)[:, 0]
        assert rep.sum_value == pytest.approx(sm.character_sum_values(chi, pts))


def test_report_json_schema():
    rep = sm.character_sum_over_gap(quadratic_character(7), Gap.line(7, [1], [3], base=1))
    d = rep.to_json()
    assert set(d) == {"kind", "q", "s", "r", "inputs", "sum_re", "sum_im", "magnitude",
                      "chain_bound", "shape_bound", "ratio_to_shape"}
    assert d["inputs"]["gap"]["base"] == [1]
    assert d["shape_bound"] == pytest.approx(math.sqrt(7) * math.log(7))
