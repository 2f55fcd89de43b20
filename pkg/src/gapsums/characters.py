"""Dirichlet characters mod q, their conductors and Gauss sums.

A character is stored as one exponent per unit-group generator (see
:func:`gapsums.modring.unit_group`): chi(g_j) = exp(2 pi i k_j / ord(g_j)).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

import numpy as np

from .modring import (
    Modulus,
    as_modulus,
    divisors,
    factorize,
    mobius,
    roots_of_unity,
    unit_group,
    unit_log_table,
)


def _valuation(n: int, p: int) -> int:
    v = 0
    while n and n % p == 0:
        n //= p
        v += 1
    return v


def _component_conductor(p: int, e: int, exps: tuple[int, ...], orders: tuple[int, ...]) -> int:
    if p != 2:
        (k,) = exps
        if k == 0:
            return 1
        # trivial on the kernel of reduction to p^f iff p^(e-f) | k
        return p ** (e - min(_valuation(k, p), e - 1))
    if e == 1:
        return 1
    if e == 2:
        return 1 if exps[0] == 0 else 4
    ka, kb = exps
    if kb == 0:
        return 1 if ka == 0 else 4
    return 2 ** (e - _valuation(kb, 2))


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: Modulus
    exponents: tuple[int, ...]
    conductor: int = field(init=False, compare=False)

    def __post_init__(self):
        orders = unit_group(self.modulus).orders
        if len(self.exponents) != len(orders):
            raise ValueError(
                f"expected {len(orders)} exponents for modulus {self.modulus.q}, got {len(self.exponents)}"
            )
        exps = tuple(int(k) % o for k, o in zip(self.exponents, orders))
        object.__setattr__(self, "exponents", exps)
        f, i = 1, 0
        for comp in unit_group(self.modulus).components:
            n = len(comp.orders)
            f *= _component_conductor(comp.prime, comp.exponent, exps[i : i + n], comp.orders)
            i += n
        object.__setattr__(self, "conductor", f)

    @classmethod
    def from_exponents(cls, q, exponents) -> "DirichletCharacter":
        return cls(as_modulus(q), tuple(exponents))

    @property
    def q(self) -> int:
        return self.modulus.q

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.q

    @property
    def is_principal(self) -> bool:
        return not any(self.exponents)

    @property
    def order(self) -> int:
        orders = unit_group(self.modulus).orders
        return math.lcm(1, *(o // math.gcd(k, o) for k, o in zip(self.exponents, orders)))

    @cached_property
    def numerators(self) -> np.ndarray:
        """Phase numerators over the group exponent E; -1 on non-units."""
        ug = unit_group(self.modulus)
        E = ug.exponent
        logs = unit_log_table(self.q)
        weights = np.array([k * (E // o) for k, o in zip(self.exponents, ug.orders)], dtype=np.int64)
        num = (logs @ weights) % E if len(weights) else np.zeros(self.q, dtype=np.int64)
        units = np.gcd(np.arange(self.q), self.q) == 1
        num = np.where(units, num, -1)
        num.setflags(write=False)
        return num

    @cached_property
    def values(self) -> np.ndarray:
        """chi(n) for n = 0..q-1 as a complex array."""
        E = unit_group(self.modulus).exponent
        num = self.numerators
        vals = np.where(num >= 0, np.exp(2j * np.pi * np.maximum(num, 0) / E), 0)
        vals.setflags(write=False)
        return vals

    def __call__(self, n: int) -> complex:
        return complex(self.values[n % self.q])

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple(-k for k in self.exponents))

    @property
    def is_even(self) -> bool:
        return abs(self(-1) - 1) < 1e-9

    @property
    def label(self) -> str:
        return f"{self.q}:" + ".".join(map(str, self.exponents))

    def to_json(self) -> dict:
        return {"q": self.q, "exponents": list(self.exponents), "conductor": self.conductor}

    @classmethod
    def from_json(cls, obj: dict) -> "DirichletCharacter":
        chi = cls.from_exponents(obj["q"], obj["exponents"])
        if "conductor" in obj and obj["conductor"] != chi.conductor:
            raise ValueError(f"conductor mismatch in serialized character {obj}")
        return chi


def enumerate_characters(q) -> list[DirichletCharacter]:
    """All phi(q) characters, lexicographic in exponent vectors (principal first)."""
    mod = as_modulus(q)
    orders = unit_group(mod).orders
    return [DirichletCharacter(mod, e) for e in itertools.product(*(range(o) for o in orders))]


def iter_primitive_characters(q) -> Iterator[DirichletCharacter]:
    return (chi for chi in enumerate_characters(q) if chi.is_primitive)


def primitive_characters(q) -> list[DirichletCharacter]:
    return list(iter_primitive_characters(q))


def principal_character(q) -> DirichletCharacter:
    mod = as_modulus(q)
    return DirichletCharacter(mod, (0,) * len(unit_group(mod).orders))


def quadratic_character(p: int) -> DirichletCharacter:
    """The Legendre symbol mod an odd prime p."""
    mod = factorize(p)
    if not mod.is_prime or p == 2:
        raise ValueError(f"{p} is not an odd prime")
    return DirichletCharacter(mod, ((p - 1) // 2,))


def evaluate(chi: DirichletCharacter, n: int) -> complex:
    return chi(n)


def conductor(chi: DirichletCharacter) -> int:
    return chi.conductor


def is_primitive(chi: DirichletCharacter) -> bool:
    return chi.is_primitive


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum_{a mod q} chi(a) e_q(a)."""
    return complex(np.dot(chi.values, roots_of_unity(chi.q)))


def char_fourier(chi: DirichletCharacter, b: int) -> complex:
    """sum_{a mod q} chi(a) e_q(a b), summed directly."""
    q = chi.q
    idx = (np.arange(q) * (b % q)) % q
    return complex(np.dot(chi.values, roots_of_unity(q)[idx]))


def char_fourier_all(chi: DirichletCharacter) -> np.ndarray:
    """char_fourier(chi, b) for every b in [0, q)."""
    q = chi.q
    a = np.arange(q)
    return roots_of_unity(q)[np.outer(a, a) % q] @ chi.values


def gauss_identity_rhs(chi: DirichletCharacter, b: int) -> complex:
    """tau(chi) * conj(chi(b)); equals char_fourier(chi, b) when chi is primitive."""
    return gauss_sum(chi) * chi(b).conjugate()


def primitive_count(q: int) -> int:
    """Number of primitive characters mod q via the Mobius sum over divisors."""
    return sum(mobius(q // d) * factorize(d).phi for d in divisors(q))
