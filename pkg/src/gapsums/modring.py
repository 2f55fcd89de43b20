"""Modular arithmetic substrate: factorization, unit groups, roots of unity."""

from __future__ import annotations

import cmath
import itertools
import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

MAX_FACTOR_INPUT = 2**60

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    # n is odd and composite
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n)
    _split(d, out)
    _split(n // d, out)


@dataclass(frozen=True)
class Modulus:
    q: int
    factors: tuple[tuple[int, int], ...]
    phi: int

    def __int__(self) -> int:
        return self.q

    @property
    def prime_powers(self) -> tuple[int, ...]:
        return tuple(p**e for p, e in self.factors)

    @property
    def is_prime(self) -> bool:
        return len(self.factors) == 1 and self.factors[0][1] == 1


def factorize(n: int) -> Modulus:
    """Factor ``n`` (1 <= n <= 2**60) into a :class:`Modulus`."""
    n = int(n)
    if n < 1:
        raise ValueError(f"cannot factor {n}: modulus must be positive")
    if n > MAX_FACTOR_INPUT:
        raise ValueError(f"{n} exceeds the supported factorization range 2**60")
    found: dict[int, int] = {}
    m = n
    for p in range(2, 1000):
        if p * p > m:
            break
        while m % p == 0:
            found[p] = found.get(p, 0) + 1
            m //= p
    _split(m, found)
    factors = tuple(sorted(found.items()))
    phi = 1
    for p, e in factors:
        phi *= p ** (e - 1) * (p - 1)
    return Modulus(n, factors, phi)


def as_modulus(q) -> Modulus:
    return q if isinstance(q, Modulus) else factorize(q)


def multiplicative_order(g: int, m: int) -> int:
    """Order of ``g`` in (Z/m)^*; brute force, intended for tests and small m."""
    if m == 1:
        return 1
    if math.gcd(g, m) != 1:
        raise ValueError(f"{g} is not a unit mod {m}")
    x, k = g % m, 1
    while x != 1:
        x = x * g % m
        k += 1
    return k


@dataclass(frozen=True)
class UnitComponent:
    """Cyclic decomposition of (Z/p^e)^*."""

    prime: int
    exponent: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]

    @property
    def modulus(self) -> int:
        return self.prime**self.exponent


@dataclass(frozen=True)
class UnitGroupStructure:
    modulus: Modulus
    components: tuple[UnitComponent, ...]

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(o for c in self.components for o in c.orders)

    @property
    def exponent(self) -> int:
        """Least common multiple of the generator orders."""
        return math.lcm(1, *self.orders)

    def lifted_generators(self) -> list[int]:
        """Generators as residues mod q (CRT lift, 1 on the other components)."""
        q = self.modulus.q
        out = []
        for comp in self.components:
            m = comp.modulus
            rest = q // m
            for g in comp.generators:
                # x = g mod m, x = 1 mod rest
                x = (g * rest * pow(rest, -1, m) + m * pow(m, -1, rest)) % q if rest > 1 else g
                out.append(x % q)
        return out


def _smallest_primitive_root(p: int, e: int) -> int:
    m = p**e
    phi = p ** (e - 1) * (p - 1)
    primes = [f for f, _ in factorize(phi).factors]
    for g in range(2, m):
        if g % p == 0:
            continue
        if all(pow(g, phi // f, m) != 1 for f in primes):
            return g
    raise AssertionError(f"no primitive root mod {m}")


@lru_cache(maxsize=None)
def _component(p: int, e: int) -> UnitComponent:
    m = p**e
    if p == 2:
        if e == 1:
            return UnitComponent(2, 1, (), ())
        if e == 2:
            return UnitComponent(2, 2, (m - 1,), (2,))
        return UnitComponent(2, e, (m - 1, 5), (2, 2 ** (e - 2)))
    g = _smallest_primitive_root(p, e)
    return UnitComponent(p, e, (g,), (p ** (e - 1) * (p - 1),))


def unit_group(q) -> UnitGroupStructure:
    mod = as_modulus(q)
    return UnitGroupStructure(mod, tuple(_component(p, e) for p, e in mod.factors))


@lru_cache(maxsize=64)
def component_log_table(p: int, e: int) -> np.ndarray:
    """Discrete logs for residues mod p^e, shape (p^e, #generators); -1 on non-units."""
    comp = _component(p, e)
    m = comp.modulus
    table = np.full((m, len(comp.generators)), -1, dtype=np.int64)
    if not comp.generators:
        return table
    if len(comp.generators) == 1:
        g, x = comp.generators[0], 1
        for k in range(comp.orders[0]):
            table[x, 0] = k
            x = x * g % m
        table.setflags(write=False)
        return table
    # 2^e with e >= 3: u = (-1)^a * 5^b
    x = 1
    for b in range(comp.orders[1]):
        table[x] = (0, b)
        table[m - x] = (1, b)
        x = x * 5 % m
    table.setflags(write=False)
    return table


@lru_cache(maxsize=64)
def unit_log_table(q: int) -> np.ndarray:
    """Exponent vectors of every residue mod q w.r.t. ``unit_group(q)`` generators.

    Row n holds the discrete logs of n on each generator; rows of non-units are -1.
    """
    mod = factorize(q)
    n = np.arange(q)
    cols = []
    unit = np.ones(q, dtype=bool)
    for p, e in mod.factors:
        t = component_log_table(p, e)[n % p**e]
        unit &= (n % p) != 0
        cols.append(t)
    table = np.concatenate(cols, axis=1) if cols else np.zeros((q, 0), dtype=np.int64)
    table[~unit] = -1
    table.setflags(write=False)
    return table


def log_vector(q: int, n: int) -> tuple[int, ...] | None:
    """Discrete-log exponent vector of ``n`` mod ``q``, or None when not a unit."""
    mod = factorize(q)
    if math.gcd(n, q) != 1:
        return None
    out: list[int] = []
    for p, e in mod.factors:
        out.extend(int(v) for v in component_log_table(p, e)[n % p**e])
    return tuple(out)


def eq_root(q: int, x: int) -> complex:
    """e_q(x) = exp(2 pi i x / q)."""
    return cmath.exp(2j * math.pi * (x % q) / q)


def roots_of_unity(q: int) -> np.ndarray:
    """Array of e_q(k) for k = 0..q-1."""
    return np.exp(2j * np.pi * np.arange(q) / q)


def distance_to_integer(c: int, q: int) -> float:
    """||c/q||, the distance from c/q to the nearest integer."""
    r = c % q
    return min(r, q - r) / q


def geometric_sum(q: int, c: int, H: int) -> complex:
    """Closed form of sum_{h=0}^{H-1} e_q(c h)."""
    if H < 1:
        raise ValueError("H must be positive")
    c %= q
    if c == 0:
        return complex(H)
    mag = math.sin(math.pi * c * H / q) / math.sin(math.pi * c / q)
    # phase e_q(c (H-1) / 2) = exp(i pi c (H-1) / q)
    return mag * cmath.exp(1j * math.pi * ((c * (H - 1)) % (2 * q)) / q)


def geometric_ceiling(q: int, c: int, H: int) -> float:
    """min{H, 1 / (2 ||c/q||)}; dominates |geometric_sum(q, c, H)|."""
    d = distance_to_integer(c, q)
    return float(H) if d == 0 else min(float(H), 1.0 / (2.0 * d))


def geometric_sum_abs(q: int, H: int) -> np.ndarray:
    """|geometric_sum(q, c, H)| for every c in [0, q)."""
    c = np.arange(q)
    out = np.full(q, float(H))
    nz = c != 0
    out[nz] = np.abs(np.sin(np.pi * c[nz] * H / q) / np.sin(np.pi * c[nz] / q))
    return out


def geometric_sum_abs_bound_ok(q: int, H: int, atol: float = 1e-9) -> bool:
    """Check |sum| <= min{H, (pi/2) ||c/q||^-1} for every c (the usual geometric-sum estimate)."""
    mags = geometric_sum_abs(q, H)
    for c in range(q):
        d = distance_to_integer(c, q)
        ceiling = float(H) if d == 0 else min(float(H), (math.pi / 2) / d)
        if mags[c] > ceiling + atol:
            return False
    return True


def iter_vectors(q: int, s: int) -> Iterator[tuple[int, ...]]:
    """All vectors of Z_q^s in lexicographic order."""
    return itertools.product(range(q), repeat=s)


def all_vectors(q: int, s: int) -> np.ndarray:
    """Z_q^s as an array of shape (q**s, s), lexicographic order."""
    grids = np.meshgrid(*([np.arange(q)] * s), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1) if s else np.zeros((1, 0), dtype=np.int64)


def dot_mod(vectors: np.ndarray, a: Sequence[int], q: int) -> np.ndarray:
    return (vectors @ np.asarray(a, dtype=np.int64)) % q


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return [int(p) for p in np.flatnonzero(sieve)]


def mobius(n: int) -> int:
    mod = factorize(n)
    if any(e > 1 for _, e in mod.factors):
        return 0
    return -1 if len(mod.factors) % 2 else 1


def divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorize(n).factors:
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)
