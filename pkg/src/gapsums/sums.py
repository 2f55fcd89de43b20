"""Character sums and polynomial exponential sums over GAPs, with their bounds.

Every report carries two bounds.  ``shape_bound`` is the asymptotic shape
without its constant (sqrt(q) (log q)^r and friends) and is only useful for
trend tables.  ``chain_bound`` is ||f^||_inf * ||A^||_1 / q^s, a genuine
inequality at every q, and is what the sweeps assert.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .characters import DirichletCharacter
from .errors import ModulusMismatchError, PreconditionError
from .fourier import l1_norm
from .gap import Gap, enumerate_elements
from .modring import is_prime, roots_of_unity

CHAIN_ATOL = 1e-6
WEIL_QMAX = 10**4


@dataclass(frozen=True)
class PolynomialModQ:
    """h(x) = c_0 + c_1 x + ... + c_d x^d with coefficients reduced mod q."""

    q: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("modulus must be positive")
        if not self.coeffs:
            raise ValueError("need at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(int(c) % self.q for c in self.coeffs))

    @classmethod
    def monomial(cls, q: int, d: int) -> "PolynomialModQ":
        return cls(q, (0,) * d + (1,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    def validate(self) -> None:
        """Raise unless q is prime, 2 <= d < q and q does not divide c_d."""
        if not is_prime(self.q):
            raise PreconditionError(f"q={self.q} is not prime")
        d = self.degree
        if not 2 <= d < self.q:
            raise PreconditionError(f"degree {d} outside [2, q) for q={self.q}")
        if self.leading == 0:
            raise PreconditionError(f"leading coefficient divisible by q={self.q}")

    def __call__(self, n: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * n + c) % self.q
        return acc

    def values(self, n=None) -> np.ndarray:
        """Horner evaluation mod q at every n in ``n`` (default all of Z_q)."""
        q = self.q
        n = np.arange(q, dtype=np.int64) if n is None else np.asarray(n, dtype=np.int64) % q
        acc = np.zeros_like(n)
        for c in reversed(self.coeffs):
            acc = (acc * n + c) % q
        return acc

    def to_json(self) -> dict:
        return {"q": self.q, "coeffs": list(self.coeffs)}

    @property
    def label(self) -> str:
        return f"{self.q}:poly:" + ".".join(map(str, self.coeffs))


@dataclass(frozen=True)
class SumReport:
    kind: str
    q: int
    s: int
    r: int
    sum_value: complex
    shape_bound: float
    chain_bound: float | None
    function: dict = field(compare=False)
    gap: Gap = field(compare=False)
    function_label: str = ""

    @property
    def magnitude(self) -> float:
        return abs(self.sum_value)

    @property
    def analytic_bound(self) -> float:
        return self.shape_bound

    @property
    def ratio(self) -> float:
        if self.shape_bound == 0:
            return math.inf if self.magnitude > 0 else 0.0
        return self.magnitude / self.shape_bound

    def chain_holds(self, atol: float = CHAIN_ATOL) -> bool:
        return self.chain_bound is None or self.magnitude <= self.chain_bound + atol

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "q": self.q,
            "s": self.s,
            "r": self.r,
            "inputs": {"function": self.function, "gap": self.gap.to_json()},
            "sum_re": self.sum_value.real,
            "sum_im": self.sum_value.imag,
            "magnitude": self.magnitude,
            "chain_bound": self.chain_bound,
            "shape_bound": self.shape_bound,
            "ratio_to_shape": self.ratio,
        }


def _check_modulus(chi: DirichletCharacter, gap: Gap) -> None:
    if chi.q != gap.q:
        raise ModulusMismatchError(f"character modulus {chi.q} differs from GAP modulus {gap.q}")


def _log_power(q: int, r: int) -> float:
    return math.log(q) ** r


def character_sum_over_gap(chi: DirichletCharacter, gap: Gap, l1: float | None = None) -> SumReport:
    """sum_{a in A} chi(a) over a one-dimensional GAP (with multiplicity).

    The chain bound sqrt(q) ||A^||_1 / q is attached only for primitive chi.
    ``l1`` may be passed to reuse a precomputed ||A^||_1.
    """
    _check_modulus(chi, gap)
    if gap.s != 1:
        raise ValueError("character_sum_over_gap needs s = 1; use multilinear_character_sum")
    q = gap.q
    pts = enumerate_elements(gap)[:, 0]
    total = complex(chi.values[pts].sum())
    chain = None
    if chi.is_primitive:
        chain = completion_bound(math.sqrt(q), gap, l1)
    return SumReport("character", q, 1, gap.r, total, math.sqrt(q) * _log_power(q, gap.r), chain,
                     chi.to_json(), gap, chi.label)


def poly_fourier_all(h: PolynomialModQ) -> np.ndarray:
    """f^(b) = sum_a e_q(h(a) + b a) for every b in Z_q."""
    q = h.q
    v = roots_of_unity(q)[h.values()]
    # sum_a v_a exp(2 pi i a b / q) is q times the inverse DFT
    return q * np.fft.ifft(v)


def poly_sup_norm(h: PolynomialModQ) -> float:
    return float(np.abs(poly_fourier_all(h)).max())


def poly_exp_sum_over_gap(h: PolynomialModQ, gap: Gap, l1: float | None = None, f_inf: float | None = None) -> SumReport:
    """sum_{n in A} e_q(h(n)) for prime q; chain bound uses the exact sup of f^."""
    h.validate()
    if h.q != gap.q:
        raise ModulusMismatchError(f"polynomial modulus {h.q} differs from GAP modulus {gap.q}")
    if gap.s != 1:
        raise ValueError("poly_exp_sum_over_gap needs s = 1")
    q = gap.q
    pts = enumerate_elements(gap)[:, 0]
    total = complex(roots_of_unity(q)[h.values(pts)].sum())
    if f_inf is None:
        f_inf = poly_sup_norm(h)
    chain = completion_bound(f_inf, gap, l1)
    shape = h.degree * math.sqrt(q) * _log_power(q, gap.r)
    return SumReport("polynomial", q, 1, gap.r, total, shape, chain, h.to_json(), gap, h.label)


def multilinear_character_sum(chi: DirichletCharacter, gap: Gap, l1: float | None = None) -> SumReport:
    """sum over a in A of chi(a_1 a_2 ... a_s), A a GAP in Z_q^s."""
    _check_modulus(chi, gap)
    q, s = gap.q, gap.s
    pts = enumerate_elements(gap)
    prod = np.ones(pts.shape[0], dtype=np.int64)
    for j in range(s):
        prod = prod * pts[:, j] % q
    total = complex(chi.values[prod].sum())
    chain = completion_bound(q ** (s / 2), gap, l1) if chi.is_primitive else None
    shape = q ** (s / 2) * _log_power(q, gap.r)
    return SumReport("multilinear", q, s, gap.r, total, shape, chain, chi.to_json(), gap, chi.label)


def multilinear_fourier_all(chi: DirichletCharacter) -> np.ndarray:
    """f^(b1, b2) = sum_{a in Z_q^2} chi(a1 a2) e_q(a . b) summed directly, shape (q, q)."""
    q = chi.q
    a = np.arange(q)
    W = roots_of_unity(q)[np.outer(a, a) % q]
    V = chi.values[np.outer(a, a) % q]
    return W @ V @ W.T


def completion_bound(f_inf: float, gap: Gap, l1: float | None = None) -> float:
    """||f^||_inf * ||A^||_1 / q^s."""
    if f_inf < 0:
        raise ValueError("f_inf must be nonnegative")
    if f_inf == 0:
        return 0.0
    if l1 is None:
        l1 = l1_norm(gap)
    return f_inf * l1 / float(gap.q) ** gap.s


@dataclass(frozen=True)
class WeilReport:
    q: int
    degree: int
    max_magnitude: float
    ceiling: float
    argmax: int

    @property
    def ok(self) -> bool:
        return self.max_magnitude <= self.ceiling + CHAIN_ATOL


def weil_complete_sum_check(h: PolynomialModQ) -> WeilReport:
    """Exact max over b of |sum_a e_q(h(a) + b a)| against (d - 1) sqrt(q)."""
    h.validate()
    if h.q > WEIL_QMAX:
        raise PreconditionError(f"q={h.q} exceeds the Weil check limit {WEIL_QMAX}")
    mags = np.abs(poly_fourier_all(h))
    b = int(mags.argmax())
    return WeilReport(h.q, h.degree, float(mags[b]), (h.degree - 1) * math.sqrt(h.q), b)


def weil_max_batch(q: int, top_coeffs: np.ndarray) -> np.ndarray:
    """max_b |sum_a e_q(h(a) + b a)| for many polynomials at once.

    ``top_coeffs`` has shape (n, d - 1) holding (c_2, ..., c_d).  c_0 only
    rotates the sum and c_1 is absorbed by the shift b, so both are taken as 0.
    """
    top_coeffs = np.asarray(top_coeffs, dtype=np.int64)
    a = np.arange(q, dtype=np.int64)
    acc = np.zeros((top_coeffs.shape[0], q), dtype=np.int64)
    for j in range(top_coeffs.shape[1] - 1, -1, -1):
        acc = (acc * a + top_coeffs[:, j : j + 1]) % q
    acc = acc * a % q * a % q
    v = roots_of_unity(q)[acc]
    return np.abs(q * np.fft.ifft(v, axis=1)).max(axis=1)


def character_sum_values(chi: DirichletCharacter, elements: Sequence[int]) -> complex:
    return complex(chi.values[np.asarray(elements, dtype=np.int64) % chi.q].sum())


def poly_sum_values(h: PolynomialModQ, elements: Sequence[int]) -> complex:
    """sum of e_q(h(n)) over an explicit multiset of residues."""
    return complex(roots_of_unity(h.q)[h.values(np.asarray(elements, dtype=np.int64))].sum())
