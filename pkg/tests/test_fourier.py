import cmath
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gapsums import fourier as fo
from gapsums.constants import l1_constant
from gapsums.errors import PreconditionError
from gapsums.gap import Gap, is_proper_kernel


def dft_oracle(g):
    """A^(b) for every b by the raw double loop over points and frequencies."""
    q, s = g.q, g.s
    pts = []
    for hs in itertools.product(*(range(h) for h in g.lengths)):
        pts.append([(b + sum(h * a[j] for h, a in zip(hs, g.generators))) for j, b in enumerate(g.base)])
    out = []
    for b in itertools.product(range(q), repeat=s):
        out.append(sum(cmath.exp(2j * math.pi * sum(x * y for x, y in zip(p, b)) / q) for p in pts))
    return np.array(out)


@st.composite
def gaps(draw, qmax=11, smax=2, rmax=2):
    q = draw(st.integers(2, qmax))
    s = draw(st.integers(1, smax))
    r = draw(st.integers(1, rmax))
    vec = st.tuples(*([st.integers(0, q - 1)] * s))
    return Gap(q, draw(vec), tuple(draw(vec) for _ in range(r)), tuple(draw(st.integers(2, q)) for _ in range(r)))


@given(gaps())
@settings(max_examples=150, deadline=None)
def test_closed_form_matches_dft(g):
    oracle = dft_oracle(g)
    assert np.allclose(fo.all_coefficients(g), oracle, atol=1e-8)
    assert np.allclose(fo.coefficient_magnitudes(g), np.abs(oracle), atol=1e-8)


@given(gaps(), st.data())
@settings(max_examples=100, deadline=None)
def test_single_coefficient_paths_agree(g, data):
    b = tuple(data.draw(st.integers(0, g.q - 1)) for _ in range(g.s))
    assert abs(fo.gap_fourier_coefficient(g, b) - fo.direct_fourier_coefficient(g, b)) < 1e-8


def test_zero_frequency_is_volume():
    g = Gap(9, (3, 4), ((1, 2), (0, 3)), (3, 2))
    assert fo.gap_fourier_coefficient(g, (0, 0)) == pytest.approx(6)


def test_full_line_vanishes_off_zero():
    g = Gap.line(7, [1], [7])
    c = fo.all_coefficients(g)
    assert c[0] == pytest.approx(7)
    assert np.abs(c[1:]).max() < 1e-9
    assert fo.l1_norm(g) == pytest.approx(7)


def test_q5_interval_examples():
    g = Gap.line(5, [1], [3])
    assert abs(fo.gap_fourier_coefficient(g, 1)) == pytest.approx(1.6180339887)
    assert fo.l1_norm(g) == pytest.approx(7.4721359, abs=1e-6)


@pytest.mark.parametrize("g,expected", [
    (Gap.line(5, [1], [3]), 5 * math.log(3)),
    (Gap.line(10, [1, 3], [3, 3]), 10 * math.log(3) ** 2),
    (Gap(7, (0, 0), ((1, 2),), (2,)), 49 * math.log(2)),
])
def test_l1_bound_examples(g, expected):
    assert fo.l1_bound(g) == pytest.approx(expected)


def test_l1_bound_requires_proper():
    with pytest.raises(PreconditionError):
        fo.l1_bound(Gap.line(4, [2], [3]))


@given(gaps(), st.integers(0, 50))
@settings(max_examples=100, deadline=None)
def test_l1_translation_invariant(g, t):
    assert fo.l1_norm(g.translate((t,) * g.s)) == pytest.approx(fo.l1_norm(g))


@given(gaps())
@settings(max_examples=200, deadline=None)
def test_parseval_and_floor(g):
    prof = fo.fourier_profile(g)
    qs = g.q**g.s
    # with multiplicity: sum_b |A^(b)|^2 = q^s * sum_x m(x)^2, which is q^s |A| when proper
    pts = [tuple(p) for p in fo.enumerate_elements(g).tolist()]
    mult = np.unique(np.array(pts), axis=0, return_counts=True)[1]
    assert prof.parseval == pytest.approx(qs * float((mult**2).sum()), rel=1e-9)
    if is_proper_kernel(g):
        assert prof.parseval == pytest.approx(qs * g.volume(), rel=1e-9)
    assert prof.l1 >= qs - 1e-6
    assert prof.linf == pytest.approx(g.volume())


@given(gaps(qmax=30, rmax=2))
@settings(max_examples=200, deadline=None)
def test_l1_within_measured_constant(g):
    if not is_proper_kernel(g):
        return
    assert fo.l1_norm(g) <= l1_constant(g.r, g.s) * fo.l1_bound(g) * (1 + 1e-12)
