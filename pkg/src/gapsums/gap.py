"""Generalized arithmetic progressions in Z_q^s.

A GAP is a0 + h1*a1 + ... + hr*ar (mod q) with 0 <= hi < Hi.  Properness
(all H1*...*Hr parameter tuples give distinct points) is decided two ways:
by enumerating the points, and by scanning the box |zi| < Hi for a nonzero
solution of z1*a1 + ... + zr*ar = 0 (mod q).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ResourceError, SamplingError
from .modring import Modulus, as_modulus

ENUMERATION_GUARD = 10**7
KERNEL_GUARD = 10**7
MAX_REJECTIONS = 10**4


def _vec(v, q: int, s: int | None = None) -> tuple[int, ...]:
    if isinstance(v, (int, np.integer)):
        v = (v,)
    out = tuple(int(x) % q for x in v)
    if s is not None and len(out) != s:
        raise ValueError(f"vector {v} has dimension {len(out)}, expected {s}")
    return out


@dataclass(frozen=True)
class Gap:
    q: int
    base: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...]
    lengths: tuple[int, ...]

    def __post_init__(self):
        q = int(self.q)
        if q < 1:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "q", q)
        base = _vec(self.base, q)
        gens = tuple(_vec(g, q, len(base)) for g in self.generators)
        lengths = tuple(int(h) for h in self.lengths)
        if not gens:
            raise ValueError("a GAP needs at least one generator")
        if len(gens) != len(lengths):
            raise ValueError("one length per generator is required")
        for h in lengths:
            if not 2 <= h <= q:
                raise ValueError(f"lengths must lie in [2, q]; got {h} for q={q}")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "lengths", lengths)

    @classmethod
    def line(cls, q: int, generators: Sequence, lengths: Sequence[int], base=0) -> "Gap":
        """Convenience constructor for s = 1: scalar base and generators."""
        return cls(q, (base,), tuple((g,) for g in generators), tuple(lengths))

    @property
    def modulus(self) -> Modulus:
        return as_modulus(self.q)

    @property
    def s(self) -> int:
        return len(self.base)

    @property
    def r(self) -> int:
        return len(self.generators)

    def volume(self) -> int:
        return math.prod(self.lengths)

    def translate(self, shift) -> "Gap":
        shift = _vec(shift, self.q, self.s)
        return Gap(self.q, tuple(b + t for b, t in zip(self.base, shift)), self.generators, self.lengths)

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "s": self.s,
            "base": list(self.base),
            "generators": [list(g) for g in self.generators],
            "lengths": list(self.lengths),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, obj) -> "Gap":
        if isinstance(obj, str):
            obj = json.loads(obj)
        gap = cls(obj["q"], tuple(obj["base"]), tuple(tuple(g) for g in obj["generators"]), tuple(obj["lengths"]))
        if "s" in obj and obj["s"] != gap.s:
            raise ValueError(f"dimension mismatch in serialized GAP {obj}")
        return gap


def _box_combinations(q: int, vectors, ranges) -> np.ndarray:
    """Rows sum_i z_i * v_i mod q over the product of ``ranges``; first range varies slowest."""
    s = len(vectors[0])
    acc = np.zeros((1, s), dtype=np.int64)
    for v, zs in zip(vectors, ranges):
        step = (np.asarray(zs, dtype=np.int64)[:, None] * np.asarray(v, dtype=np.int64)[None, :]) % q
        acc = ((acc[:, None, :] + step[None, :, :]) % q).reshape(-1, s)
    return acc


def enumerate_elements(gap: Gap) -> np.ndarray:
    """All H1*...*Hr points as an array of shape (volume, s), duplicates kept.

    Rows are ordered lexicographically in (h1, ..., hr).
    """
    if gap.volume() > ENUMERATION_GUARD:
        raise ResourceError(f"GAP volume {gap.volume()} exceeds enumeration guard {ENUMERATION_GUARD}")
    pts = _box_combinations(gap.q, gap.generators, [range(h) for h in gap.lengths])
    return (pts + np.asarray(gap.base, dtype=np.int64)) % gap.q


def encode(points: np.ndarray, q: int) -> np.ndarray:
    """Pack rows of Z_q^s into integers (base-q, first coordinate most significant)."""
    code = np.zeros(points.shape[0], dtype=np.int64)
    for j in range(points.shape[1]):
        code = code * q + points[:, j]
    return code


def is_proper_enumeration(gap: Gap) -> bool:
    pts = enumerate_elements(gap)
    return np.unique(encode(pts, gap.q)).size == pts.shape[0]


def has_short_kernel_vector(q: int, generators, lengths) -> bool:
    """Whether some nonzero z with |z_i| < H_i solves sum z_i a_i = 0 (mod q)."""
    gens = [tuple(int(x) % q for x in ((g,) if isinstance(g, (int, np.integer)) else g)) for g in generators]
    box = math.prod(2 * h - 1 for h in lengths)
    if box > KERNEL_GUARD:
        raise ResourceError(f"kernel box size {box} exceeds guard {KERNEL_GUARD}")
    sums = _box_combinations(q, gens, [range(-(h - 1), h) for h in lengths])
    zero_hits = int(np.count_nonzero(~sums.any(axis=1)))
    # z = 0 always hits
    return zero_hits > 1


def is_proper_kernel(gap: Gap) -> bool:
    return not has_short_kernel_vector(gap.q, gap.generators, gap.lengths)


def is_proper(gap: Gap) -> bool:
    return is_proper_kernel(gap)


def random_proper_gap(
    q,
    s: int,
    r: int,
    length_bounds: tuple[int, int],
    seed: int,
    max_rejections: int = MAX_REJECTIONS,
) -> Gap:
    """Rejection-sample a proper GAP; deterministic in ``seed`` (Philox stream)."""
    q = as_modulus(q).q
    lo, hi = length_bounds
    lo, hi = max(2, lo), min(q, hi)
    if lo > hi:
        raise SamplingError(f"empty length range {length_bounds} for q={q}", 0)
    rng = np.random.Generator(np.random.Philox(key=seed))
    for _ in range(max_rejections):
        lengths = tuple(int(h) for h in rng.integers(lo, hi + 1, size=r))
        gens = tuple(tuple(int(x) for x in rng.integers(0, q, size=s)) for _ in range(r))
        base = tuple(int(x) for x in rng.integers(0, q, size=s))
        if math.prod(lengths) > q**s:
            continue
        if not has_short_kernel_vector(q, gens, lengths):
            return Gap(q, base, gens, lengths)
    raise SamplingError(f"no proper GAP found for q={q}, s={s}, r={r}, lengths {length_bounds}", max_rejections)
