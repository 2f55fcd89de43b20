"""Fourier coefficients of GAP indicator functions on Z_q^s.

Normalisation: A^(b) = sum_{a in A} e_q(a . b), summed with multiplicity.
For a GAP this factors as e_q(a0 . b) * prod_i sum_{h < H_i} e_q(h (b . a_i)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError, ResourceError
from .gap import Gap, enumerate_elements, is_proper_kernel
from .modring import all_vectors, eq_root, geometric_sum, geometric_sum_abs, roots_of_unity

FREQUENCY_GUARD = 10**7


def gap_fourier_coefficient(gap: Gap, b) -> complex:
    """Closed form of A^(b) via the product of geometric sums."""
    q = gap.q
    b = (b,) if isinstance(b, (int, np.integer)) else tuple(b)
    if len(b) != gap.s:
        raise ValueError(f"frequency {b} has the wrong dimension for s={gap.s}")
    dot = lambda v: sum(x * y for x, y in zip(v, b))  # noqa: E731
    value = eq_root(q, dot(gap.base))
    for a, h in zip(gap.generators, gap.lengths):
        value *= geometric_sum(q, dot(a), h)
    return value


def direct_fourier_coefficient(gap: Gap, b) -> complex:
    """A^(b) by summing e_q(a . b) over the enumerated elements."""
    q = gap.q
    b = np.atleast_1d(np.asarray(b, dtype=np.int64))
    pts = enumerate_elements(gap)
    return complex(roots_of_unity(q)[(pts @ b) % q].sum())


def _check_frequency_guard(gap: Gap) -> None:
    if gap.q**gap.s > FREQUENCY_GUARD:
        raise ResourceError(f"q^s = {gap.q ** gap.s} exceeds frequency guard {FREQUENCY_GUARD}")


def coefficient_magnitudes(gap: Gap) -> np.ndarray:
    """|A^(b)| for every b in Z_q^s (lexicographic order), via the closed form."""
    _check_frequency_guard(gap)
    q = gap.q
    freqs = all_vectors(q, gap.s)
    mags = np.ones(freqs.shape[0])
    for a, h in zip(gap.generators, gap.lengths):
        mags *= geometric_sum_abs(q, h)[(freqs @ np.asarray(a, dtype=np.int64)) % q]
    return mags


def all_coefficients(gap: Gap) -> np.ndarray:
    """Complex A^(b) for every b in Z_q^s via the closed form, vectorized."""
    _check_frequency_guard(gap)
    q = gap.q
    freqs = all_vectors(q, gap.s)
    vals = roots_of_unity(q)[(freqs @ np.asarray(gap.base, dtype=np.int64)) % q].astype(complex)
    c = np.arange(q)
    for a, h in zip(gap.generators, gap.lengths):
        geo = np.array([geometric_sum(q, int(x), h) for x in c])
        vals *= geo[(freqs @ np.asarray(a, dtype=np.int64)) % q]
    return vals


def l1_norm(gap: Gap) -> float:
    """sum_b |A^(b)| over all of Z_q^s."""
    return float(coefficient_magnitudes(gap).sum())


def l1_bound(gap: Gap) -> float:
    """q^s * prod(log H_i), natural log, without the implied constant."""
    if not is_proper_kernel(gap):
        raise PreconditionError(f"GAP {gap.to_json()} is not proper")
    return float(gap.q) ** gap.s * math.prod(math.log(h) for h in gap.lengths)


def parseval_sum(gap: Gap) -> float:
    """sum_b |A^(b)|^2; equals q^s * |A| for a proper GAP."""
    return float((coefficient_magnitudes(gap) ** 2).sum())


@dataclass(frozen=True)
class FourierProfile:
    gap: Gap
    l1: float
    linf: float
    parseval: float
    magnitudes: np.ndarray = field(repr=False, compare=False)

    def coefficient(self, b) -> complex:
        return gap_fourier_coefficient(self.gap, b)


def fourier_profile(gap: Gap) -> FourierProfile:
    mags = coefficient_magnitudes(gap)
    return FourierProfile(gap, float(mags.sum()), float(mags.max()), float((mags**2).sum()), mags)
