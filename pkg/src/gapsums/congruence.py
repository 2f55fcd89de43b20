"""Counting solutions of x_i = a_i . y (mod q) with x_i in short intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import PreconditionError, ResourceError
from .gap import has_short_kernel_vector
from .constants import counting_constant  # noqa: F401
from .modring import all_vectors, as_modulus

COUNT_GUARD = 10**7


@dataclass(frozen=True)
class BoxInterval:
    """Consecutive integers [lo, lo + len), matched against residues mod q."""

    lo: int
    len: int

    def __post_init__(self):
        if self.len < 0:
            raise ValueError("interval length must be nonnegative")

    def contains(self, x, q: int):
        """Residue membership; works elementwise on arrays."""
        if self.len >= q:
            return np.ones_like(x, dtype=bool) if isinstance(x, np.ndarray) else True
        return (x - self.lo) % q < self.len

    def residues(self, q: int) -> list[int]:
        return [(self.lo + k) % q for k in range(min(self.len, q))]


@dataclass(frozen=True)
class CongruenceInstance:
    q: int
    generators: tuple[tuple[int, ...], ...]
    intervals: tuple[BoxInterval, ...]
    lengths: tuple[int, ...]

    def __post_init__(self):
        q = as_modulus(self.q).q
        object.__setattr__(self, "q", q)
        gens = tuple(tuple(int(x) % q for x in ((g,) if isinstance(g, (int, np.integer)) else g)) for g in self.generators)
        if not gens or len({len(g) for g in gens}) != 1:
            raise ValueError("generators must be nonempty vectors of one dimension")
        if len(gens) != len(self.intervals) or len(gens) != len(self.lengths):
            raise ValueError("need one interval and one length per generator")
        for iv in self.intervals:
            if iv.len > q:
                raise ValueError(f"interval length {iv.len} exceeds q={q}")
        for h in self.lengths:
            if not 1 <= h <= q:
                raise ValueError(f"lengths must lie in [1, q]; got {h}")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "intervals", tuple(self.intervals))
        object.__setattr__(self, "lengths", tuple(int(h) for h in self.lengths))

    @property
    def s(self) -> int:
        return len(self.generators[0])

    @property
    def r(self) -> int:
        return len(self.generators)

    def kernel_condition(self) -> bool:
        return not has_short_kernel_vector(self.q, self.generators, self.lengths)


def make_instance(q: int, generators: Sequence, intervals: Sequence[tuple[int, int]], lengths: Sequence[int]):
    return CongruenceInstance(q, tuple(generators), tuple(BoxInterval(lo, n) for lo, n in intervals), tuple(lengths))


def count_solutions_exact(inst: CongruenceInstance) -> int:
    """Brute force over y in Z_q^s; each y fixes every x_i mod q."""
    q, s = inst.q, inst.s
    if q**s > COUNT_GUARD:
        raise ResourceError(f"q^s = {q**s} exceeds counting guard {COUNT_GUARD}")
    ys = all_vectors(q, s)
    ok = np.ones(ys.shape[0], dtype=bool)
    for a, iv in zip(inst.generators, inst.intervals):
        ok &= iv.contains((ys @ np.asarray(a, dtype=np.int64)) % q, q)
    return int(np.count_nonzero(ok))


def count_solutions_by_residues(inst: CongruenceInstance) -> int:
    """Rank-one counter: walk x through the interval and solve a.y = x (mod q).

    Independent of :func:`count_solutions_exact`; only r = 1 is supported.
    """
    if inst.r != 1:
        raise ValueError("the residue-walk counter handles r = 1 only")
    q, s = inst.q, inst.s
    (a,) = inst.generators
    (iv,) = inst.intervals
    g = math.gcd(q, *a)
    total = 0
    for x in iv.residues(q):
        if x % g:
            continue
        if s == 1:
            # y = (x/g) * (a/g)^-1 mod q/g, then g lifts mod q
            m = q // g
            y0 = (x // g) * pow(a[0] // g, -1, m) % m if m > 1 else 0
            sols = [y0 + k * m for k in range(g)]
            total += sum(1 for y in sols if (a[0] * y - x) % q == 0)
        else:
            # the map y -> a.y has image gZ_q and fibres of size q^s / (q/g)
            total += q ** (s - 1) * g
    return total


def solution_bound(inst: CongruenceInstance) -> float:
    """q^(s-r) * prod(|I_i| + q/H_i), without the implied constant."""
    if any(not any(a) for a in inst.generators):
        raise PreconditionError("generators must be nonzero")
    if not inst.kernel_condition():
        raise PreconditionError(
            "a nonzero z with |z_i| < H_i solves sum z_i a_i = 0 (mod q); the counting bound does not apply"
        )
    q = inst.q
    return float(q) ** (inst.s - inst.r) * math.prod(iv.len + q / h for iv, h in zip(inst.intervals, inst.lengths))
