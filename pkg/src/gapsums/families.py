"""Exhaustive small-modulus families for the properness, counting and l1 checks.

The per-instance functions in :mod:`gapsums.gap`, :mod:`gapsums.congruence`
and :mod:`gapsums.fourier` are too slow to sweep every generator tuple with
q <= 30, s <= 2, r <= 2.  This module computes the same verdicts in bulk:

* properness of every box of lengths at once, as a staircase
  ``max_h2[h1]`` = largest H2 with (H1, H2) proper, once by enumerating
  points and once by scanning kernel vectors;
* the distribution M[c] = #{y in Z_q^s : (y.a_1, ..., y.a_r) = c}.  Both the
  congruence count N and ||A^||_1 are functions of M alone, so tuples are
  grouped by M and each group is evaluated once.

Base points are fixed at 0: translation changes neither verdict nor |A^|.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numba
import numpy as np

from .modring import geometric_sum_abs


def tuple_count(q: int, s: int, r: int) -> int:
    return q ** (s * r)


def decode_tuple(idx: int, q: int, s: int, r: int) -> tuple[tuple[int, ...], ...]:
    """Generator tuple number ``idx`` (base-q digits, a_1 most significant)."""
    digits = []
    for _ in range(s * r):
        digits.append(idx % q)
        idx //= q
    digits.reverse()
    return tuple(tuple(digits[i * s : (i + 1) * s]) for i in range(r))


@numba.njit(cache=True)
def _decode(idx, q, s, r, out):
    for k in range(s * r - 1, -1, -1):
        out[k] = idx % q
        idx //= q


@numba.njit(cache=True)
def _multiples(q, s, a, out):
    # out[h] = code of h * a mod q, with coordinates kept in coords[h]
    coords = np.zeros((q, s), dtype=np.int64)
    for h in range(1, q):
        for j in range(s):
            v = coords[h - 1, j] + a[j]
            coords[h, j] = v - q if v >= q else v
    for h in range(q):
        c = 0
        for j in range(s):
            c = c * q + coords[h, j]
        out[h] = c
    return coords


@numba.njit(cache=True)
def _point_code(q, s, P1, P2, h1, h2):
    code = 0
    for j in range(s):
        v = P1[h1, j] + P2[h2, j]
        code = code * q + (v - q if v >= q else v)
    return code


@numba.njit(cache=True)
def _enum_staircase_r2(q, s, P1, P2, counts, out):
    # out[H1] = largest H2 in [0, q] with the H1 x H2 box injective
    dups = 0
    H2 = 0
    out[0] = q
    for H1 in range(1, q + 1):
        for h2 in range(H2):
            c = _point_code(q, s, P1, P2, H1 - 1, h2)
            if counts[c] > 0:
                dups += 1
            counts[c] += 1
        while dups > 0:
            H2 -= 1
            for h1 in range(H1):
                c = _point_code(q, s, P1, P2, h1, H2)
                counts[c] -= 1
                if counts[c] > 0:
                    dups -= 1
        while H2 < q:
            for h1 in range(H1):
                c = _point_code(q, s, P1, P2, h1, H2)
                if counts[c] > 0:
                    dups += 1
                counts[c] += 1
            if dups > 0:
                for h1 in range(H1):
                    c = _point_code(q, s, P1, P2, h1, H2)
                    counts[c] -= 1
                    if counts[c] > 0:
                        dups -= 1
                break
            H2 += 1
        out[H1] = H2
    for h1 in range(q):
        for h2 in range(H2):
            counts[_point_code(q, s, P1, P2, h1, h2)] = 0


@numba.njit(cache=True)
def _kernel_staircase_r2(q, s, C1, C2, table, out):
    # C1[z], C2[z]: codes of z*a1, z*a2.  A kernel vector (z1, z2) has
    # z2*a2 = -z1*a1; the shortest |z2| for residue w is min(w, q - w).
    for w in range(q):
        t = table[C2[w]]
        m = w if w <= q - w else q - w
        if w > 0 and (t < 0 or m < t):
            table[C2[w]] = m
    best = np.full(q, q, dtype=np.int64)
    for z1 in range(q):
        nz = 0 if z1 == 0 else q - z1
        t = table[C1[nz]]
        if z1 == 0:
            # z2 = 0 is excluded when z1 = 0; table ignores w = 0 already
            best[z1] = t if t >= 0 else q
        elif C1[z1] == C1[0]:
            best[z1] = 0
        elif t >= 0:
            best[z1] = t
    for w in range(q):
        table[C2[w]] = -1
    out[0] = q
    running = q
    for H1 in range(1, q + 1):
        if best[H1 - 1] < running:
            running = best[H1 - 1]
        out[H1] = running


@numba.njit(cache=True)
def _staircases_r2(q, s, start, stop):
    n = stop - start
    enum = np.empty((n, q + 1), dtype=np.int16)
    kern = np.empty((n, q + 1), dtype=np.int16)
    gens = np.empty(2 * s, dtype=np.int64)
    counts = np.zeros(q**s, dtype=np.int64)
    table = np.full(q**s, -1, dtype=np.int64)
    C1 = np.empty(q, dtype=np.int64)
    C2 = np.empty(q, dtype=np.int64)
    for i in range(n):
        _decode(start + i, q, s, 2, gens)
        P1 = _multiples(q, s, gens[:s], C1)
        P2 = _multiples(q, s, gens[s:], C2)
        _enum_staircase_r2(q, s, P1, P2, counts, enum[i])
        _kernel_staircase_r2(q, s, C1, C2, table, kern[i])
    return enum, kern


@numba.njit(cache=True)
def _staircases_r1(q, s):
    n = q**s
    enum = np.empty(n, dtype=np.int64)
    kern = np.empty(n, dtype=np.int64)
    gens = np.empty(s, dtype=np.int64)
    seen = np.zeros(q**s, dtype=np.int64)
    for i in range(n):
        _decode(i, q, s, 1, gens)
        # enumeration: extend h = 0, 1, ... until a point repeats
        H = 0
        while H < q:
            code = 0
            for j in range(s):
                code = code * q + (H * gens[j]) % q
            if seen[code] == i + 1:
                break
            seen[code] = i + 1
            H += 1
        enum[i] = H
        # kernel: smallest 0 < z < q with z a = 0
        best = q
        for z in range(1, q):
            ok = True
            for j in range(s):
                if (z * gens[j]) % q != 0:
                    ok = False
                    break
            if ok:
                best = z
                break
        kern[i] = best
    return enum, kern


def staircases(q: int, s: int, r: int, start: int = 0, stop: int | None = None):
    """Properness staircases for every generator tuple in [start, stop).

    For r = 2 returns arrays of shape (n, q + 1): entry [i, H1] is the largest
    H2 (0..q) making the H1 x H2 GAP proper.  For r = 1 returns shape (n,):
    the largest proper H.  Two arrays: (by enumeration, by kernel scan).
    """
    if r == 1:
        e, k = _staircases_r1(q, s)
        return e[start:stop], k[start:stop]
    if r == 2:
        stop = tuple_count(q, s, 2) if stop is None else stop
        return _staircases_r2(q, s, start, stop)
    raise ValueError("bulk staircases are implemented for r in {1, 2}")


def staircase_disagreements(enum: np.ndarray, kern: np.ndarray, q: int) -> int:
    """Number of length tuples in [2, q]^r whose two properness verdicts differ."""
    e = np.clip(enum, 1, q)
    k = np.clip(kern, 1, q)
    if enum.ndim == 1:
        return int(np.abs(e - k).sum())
    return int(np.abs(e[:, 2:] - k[:, 2:]).sum())


# --- distributions of (y.a_1, ..., y.a_r) -----------------------------------


@numba.njit(cache=True)
def _fill_distribution(q, s, r, gens, y, M):
    # walk y through Z_q^s lexicographically, updating the r dot products
    M[:] = 0
    d = np.zeros(r, dtype=np.int64)
    if s == 2 and r == 2:
        a00, a01, a10, a11 = gens[0], gens[1], gens[2], gens[3]
        x0, x1 = 0, 0
        for y0 in range(q):
            u0, u1 = x0, x1
            for y1 in range(q):
                M[u0 * q + u1] += 1
                u0 += a01
                if u0 >= q:
                    u0 -= q
                u1 += a11
                if u1 >= q:
                    u1 -= q
            x0 += a00
            if x0 >= q:
                x0 -= q
            x1 += a10
            if x1 >= q:
                x1 -= q
        return
    y[:] = 0
    for t in range(q**s):
        c = 0
        for k in range(r):
            c = c * q + d[k]
        M[c] += 1
        j = s - 1
        while j >= 0:
            y[j] += 1
            for k in range(r):
                v = d[k] + gens[k * s + j]
                d[k] = v - q if v >= q else v
            if y[j] < q:
                break
            y[j] = 0
            # q steps of a_k[j] bring d back to where it was
            j -= 1


@numba.njit(cache=True)
def _distribution_hashes(q, s, r, weights):
    n = q ** (s * r)
    hashes = np.empty(n, dtype=np.uint64)
    gens = np.empty(s * r, dtype=np.int64)
    M = np.zeros(q**r, dtype=np.int64)
    y = np.empty(s, dtype=np.int64)
    for i in range(n):
        _decode(i, q, s, r, gens)
        _fill_distribution(q, s, r, gens, y, M)
        h = np.uint64(0)
        for c in range(q**r):
            h += np.uint64(M[c]) * weights[c]
        hashes[i] = h
    return hashes


@numba.njit(cache=True)
def _count_mismatches(q, s, r, labels, reps):
    # reps[g] is the flattened distribution of group g
    gens = np.empty(s * r, dtype=np.int64)
    M = np.zeros(q**r, dtype=np.int64)
    y = np.empty(s, dtype=np.int64)
    bad = 0
    for i in range(labels.shape[0]):
        _decode(i, q, s, r, gens)
        _fill_distribution(q, s, r, gens, y, M)
        g = labels[i]
        for c in range(q**r):
            if M[c] != reps[g, c]:
                bad += 1
                break
    return bad


def distribution(q: int, s: int, gens) -> np.ndarray:
    """M as an r-dimensional array of shape (q,)*r for one generator tuple."""
    r = len(gens)
    ys = np.stack(np.meshgrid(*([np.arange(q)] * s), indexing="ij"), -1).reshape(-1, s)
    cs = [(ys @ np.asarray(a, dtype=np.int64)) % q for a in gens]
    M = np.zeros((q,) * r, dtype=np.int64)
    np.add.at(M, tuple(cs), 1)
    return M


@dataclass
class DistributionGroups:
    """Generator tuples of Z_q^s grouped by their distribution M."""

    q: int
    s: int
    r: int
    labels: np.ndarray  # group id per tuple
    representatives: list[int]  # tuple index of each group's first member
    distributions: list[np.ndarray]


def group_by_distribution(q: int, s: int, r: int, verify: bool = True) -> DistributionGroups:
    rng = np.random.Generator(np.random.Philox(key=q * 1000 + s * 10 + r))
    weights = rng.integers(1, 2**63, size=q**r, dtype=np.uint64) | np.uint64(1)
    hashes = _distribution_hashes(q, s, r, weights)
    _, first, labels = np.unique(hashes, return_index=True, return_inverse=True)
    labels = labels.ravel().astype(np.int64)
    reps = [int(i) for i in first]
    dists = [distribution(q, s, decode_tuple(i, q, s, r)) for i in reps]
    if verify:
        flat = np.stack([d.ravel() for d in dists])
        bad = _count_mismatches(q, s, r, labels, flat)
        if bad:
            raise AssertionError(f"{bad} tuples collide with a different distribution (q={q}, s={s}, r={r})")
    return DistributionGroups(q, s, r, labels, reps, dists)


# --- cyclic box maxima --------------------------------------------------------


def cyclic_box_table(M: np.ndarray, lens: tuple[int, ...]) -> np.ndarray:
    """Sum of M over the cyclic box lo + [0, len_i), for every base point lo."""
    q = M.shape[0]
    S = M.astype(np.int64)
    for axis, L in enumerate(lens):
        if L >= q:
            S = np.broadcast_to(S.sum(axis=axis, keepdims=True), S.shape).copy()
            continue
        ext = np.concatenate([S, np.take(S, range(L), axis=axis)], axis=axis)
        cs = np.cumsum(ext, axis=axis)
        cs = np.concatenate([np.zeros_like(np.take(cs, [0], axis=axis)), cs], axis=axis)
        S = np.take(cs, range(L, L + q), axis=axis) - np.take(cs, range(0, q), axis=axis)
    return S


def cyclic_box_max(M: np.ndarray, lens: tuple[int, ...]) -> int:
    """max over base points lo of sum of M over the cyclic box lo + [0, len_i)."""
    return int(cyclic_box_table(M, lens).max())


def count_table_bruteforce(q: int, gens, lens: tuple[int, ...]) -> np.ndarray:
    """N for every interval base, straight from the definition (loop over y).

    Entry [lo_1, ..., lo_r] counts y in Z_q^s with (a_i . y - lo_i) mod q < len_i.
    """
    s = len(gens[0])
    ys = np.stack(np.meshgrid(*([np.arange(q)] * s), indexing="ij"), -1).reshape(-1, s)
    lo = np.arange(q)
    out = None
    for a, L in zip(gens, lens):
        c = (ys @ np.asarray(a, dtype=np.int64)) % q
        memb = ((c[:, None] - lo[None, :]) % q < L).astype(np.int64)  # (y, lo)
        out = memb if out is None else np.einsum("y...,yl->y...l", out, memb)
    return out.sum(axis=0)


def interval_lengths(q: int) -> tuple[int, ...]:
    """The swept interval lengths {1, ceil(q/4), ceil(q/2), q}."""
    return tuple(sorted({1, -(-q // 4), -(-q // 2), q}))


# --- the two measured ratios --------------------------------------------------


@dataclass
class RatioResult:
    max_ratio: float
    witness: dict
    evaluations: int
    counter_mismatches: int = 0  # bulk vs brute-force counts (counting ratio only)


@dataclass
class FamilyData:
    """Everything the bulk checks need for one (q, s, r)."""

    q: int
    s: int
    r: int
    enum: np.ndarray
    kern: np.ndarray
    groups: DistributionGroups
    stairs: list  # kernel staircase per group
    sizes: np.ndarray  # members per group

    @property
    def disagreements(self) -> int:
        return staircase_disagreements(self.enum, self.kern, self.q)

    @property
    def tuples(self) -> int:
        return tuple_count(self.q, self.s, self.r)


def family_data(q: int, s: int, r: int) -> FamilyData:
    groups = group_by_distribution(q, s, r)
    enum, kern = staircases(q, s, r)
    n_groups = len(groups.representatives)
    order = np.argsort(groups.labels, kind="stable")
    sizes = np.bincount(groups.labels, minlength=n_groups)
    stairs = []
    start = 0
    for g in range(n_groups):
        members = order[start : start + sizes[g]]
        start += sizes[g]
        first = kern[members[0]]
        # the kernel of z -> sum z_i a_i is the annihilator of the support of M
        if not (kern[members] == first).all():
            raise AssertionError("properness staircase is not a function of the distribution")
        stairs.append(first.astype(np.int64) if np.ndim(first) else int(first))
    return FamilyData(q, s, r, enum, kern, groups, stairs, sizes)


def _projections_nonzero(M: np.ndarray) -> bool:
    support = np.argwhere(M > 0)
    return bool((support.max(axis=0) > 0).all())


def box_max_all_lengths(M: np.ndarray) -> np.ndarray:
    """Entry [L_1 - 1, ..., L_r - 1] = max over bases of the cyclic box sum of M (r <= 2)."""
    q, r = M.shape[0], M.ndim
    L = np.arange(1, q + 1)
    win = np.arange(q)[None, :] + L[:, None]  # (length, base) -> window end

    def box_sums(S, axis):
        # all window lengths at once along ``axis``; new length axis placed first
        ext = np.concatenate([S, S], axis=axis)
        cs = np.concatenate([np.zeros_like(np.take(ext, [0], axis=axis)), np.cumsum(ext, axis=axis)], axis=axis)
        hi = np.take(cs, win, axis=axis)
        lo = np.take(cs, np.arange(q), axis=axis)
        return hi - np.expand_dims(lo, axis)

    S = M.astype(np.int64)
    if r == 1:
        return box_sums(S, 0).max(axis=1)
    if r == 2:
        A = box_sums(S, 0)  # (L1, lo1, c2)
        out = np.empty((q, q), dtype=np.int64)
        for i in range(q):
            out[i] = box_sums(A[i], 1).max(axis=(0, 2))  # (lo1, L2, lo2) -> (L2,)
        return out
    raise ValueError("box_max_all_lengths handles r <= 2")


def counting_ratio_family(data: FamilyData) -> RatioResult:
    """max N / solution_bound over nonzero generators, all H, interval lengths, bases.

    The bound shrinks as any H_i grows, so only the largest admissible H2 per
    H1 needs evaluating; N only needs its maximum over interval bases.  Every
    interval length 1..q is covered.  The bulk counts are also checked against
    the brute-force counter on the coarse length grid of :func:`interval_lengths`.
    """
    q, s, r = data.q, data.s, data.r
    coarse = interval_lengths(q)
    L = np.arange(1, q + 1, dtype=float)
    best, witness, evaluations = 0.0, {}, 0
    mismatches = 0
    for g, M in enumerate(data.groups.distributions):
        if not _projections_nonzero(M):
            continue
        gens = decode_tuple(data.groups.representatives[g], q, s, r)
        for idx in np.ndindex(*(len(coarse),) * r):
            Ls = tuple(coarse[i] for i in idx)
            mismatches += int((cyclic_box_table(M, Ls) != count_table_bruteforce(q, gens, Ls)).sum())
        stair = data.stairs[g]
        if r == 1:
            Hs = np.array([[min(stair, q)]])
        else:
            Hs = np.array([(h1, min(stair[h1], q)) for h1 in range(1, q + 1) if stair[h1] >= 1])
        if Hs.size == 0:
            continue
        Nmax = box_max_all_lengths(M).astype(float)
        # factor i of the bound, shape (length, H choice)
        f = [L[:, None] + q / Hs[None, :, i] for i in range(r)]
        if r == 1:
            bound = f[0]
            ratio = Nmax[:, None] / bound
        else:
            bound = f[0][:, None, :] * f[1][None, :, :]
            ratio = Nmax[:, :, None] / bound
        bound = bound * float(q) ** (s - r)
        ratio = ratio / float(q) ** (s - r)
        evaluations += int(data.sizes[g]) * ratio.size
        j = np.unravel_index(int(ratio.argmax()), ratio.shape)
        if ratio[j] > best:
            best = float(ratio[j])
            witness = {"q": q, "s": s, "r": r, "generators": gens,
                       "interval_lengths": tuple(int(x) + 1 for x in j[:-1]),
                       "lengths": tuple(int(h) for h in Hs[j[-1]]),
                       "N": int(Nmax[j[:-1]]), "bound": float(bound[j])}
    return RatioResult(best, witness, evaluations, mismatches)


def l1_ratio_family(data: FamilyData) -> tuple[RatioResult, dict]:
    """max ||A^||_1 / (q^s prod log H_i) over all proper GAPs (base 0), plus checks.

    The returned dict reports the worst Parseval relative error and the
    smallest ||A^||_1 / q^s seen.
    """
    q, s, r = data.q, data.s, data.r
    Hs = np.arange(2, q + 1)
    G = np.stack([geometric_sum_abs(q, int(h)) for h in Hs])  # (H, c)
    qs = float(q) ** s
    best, witness, count = 0.0, {}, 0
    worst_parseval, min_floor = 0.0, math.inf
    for g, M in enumerate(data.groups.distributions):
        stair = data.stairs[g]
        Mf = M.astype(float)
        if r == 1:
            L1 = G @ Mf
            P = (G**2) @ Mf
            proper = Hs <= stair
            vol = Hs.astype(float)
            denom = qs * np.log(Hs)
        else:
            L1 = G @ Mf @ G.T
            P = (G**2) @ Mf @ (G**2).T
            proper = Hs[None, :] <= stair[Hs][:, None]
            vol = np.outer(Hs, Hs).astype(float)
            denom = qs * np.outer(np.log(Hs), np.log(Hs))
        if not proper.any():
            continue
        count += int(data.sizes[g]) * int(proper.sum())
        ratio = np.where(proper, L1 / denom, 0.0)
        idx = np.unravel_index(int(ratio.argmax()), ratio.shape)
        if ratio[idx] > best:
            best = float(ratio[idx])
            witness = {"q": q, "s": s, "r": r,
                       "generators": decode_tuple(data.groups.representatives[g], q, s, r),
                       "lengths": tuple(int(Hs[i]) for i in idx), "l1": float(L1[idx])}
        rel = np.abs(P - qs * vol) / (qs * vol)
        worst_parseval = max(worst_parseval, float(rel[proper].max()))
        min_floor = min(min_floor, float((L1[proper] / qs).min()))
    checks = {"parseval_rel_err": worst_parseval, "min_l1_over_qs": min_floor, "proper_gaps": count}
    return RatioResult(best, witness, count), checks


# --- generic rank (slow, small q) ---------------------------------------------


def improper_region(q: int, gens) -> np.ndarray:
    """Boolean array over H in [0, q]^r: True where the GAP with lengths H is improper."""
    r = len(gens)
    s = len(gens[0])
    rng = np.arange(-(q - 1), q)
    Z = np.stack(np.meshgrid(*([rng] * r), indexing="ij"), -1).reshape(-1, r)
    A = np.asarray(gens, dtype=np.int64)  # (r, s)
    hit = ~((Z @ A) % q).any(axis=1)
    hit &= Z.any(axis=1)
    bad = np.zeros((q + 1,) * r, dtype=bool)
    need = np.abs(Z[hit]) + 1
    need = need[(need <= q).all(axis=1)]
    if need.size:
        bad[tuple(need.T)] = True
    for axis in range(r):
        bad = np.maximum.accumulate(bad, axis=axis)
    return bad


def counting_ratio_generic(q: int, s: int, r: int, lens: tuple[int, ...] | None = None) -> RatioResult:
    """Same maximisation as :func:`counting_ratio_family` for any r (q small).

    ``lens`` lists the interval lengths tried; default :func:`interval_lengths`.
    Each distinct M is evaluated once: N depends on M, and the improper region
    on the support of M (sum z_i a_i = 0 iff sum z_i c_i = 0 on every c in it).
    """
    lens = interval_lengths(q) if lens is None else tuple(lens)
    seen: dict[bytes, tuple[float, dict]] = {}
    best, witness, instances = 0.0, {}, 0
    H = np.stack(np.meshgrid(*([np.arange(q + 1)] * r), indexing="ij"), -1)
    with np.errstate(divide="ignore"):
        inv = q / np.maximum(H, 1).astype(float)
    for idx in range(tuple_count(q, s, r)):
        gens = decode_tuple(idx, q, s, r)
        if any(not any(a) for a in gens):
            continue
        M = distribution(q, s, gens)
        key = M.tobytes()
        if key not in seen:
            ok = ~improper_region(q, gens) & (H > 0).all(axis=-1)
            g_best, g_wit = 0.0, {}
            for L in itertools.product(lens, repeat=r):
                N = cyclic_box_max(M, L)
                bound = float(q) ** (s - r) * np.prod(np.asarray(L, dtype=float) + inv, axis=-1)
                ratio = np.where(ok, N / bound, 0.0)
                j = np.unravel_index(int(ratio.argmax()), ratio.shape)
                if ratio[j] > g_best:
                    g_best = float(ratio[j])
                    g_wit = {"interval_lengths": tuple(L), "lengths": tuple(int(x) for x in j),
                             "N": N, "bound": float(bound[j])}
            seen[key] = (g_best, g_wit, int(ok.sum()) * len(lens) ** r)
        g_best, g_wit, n = seen[key]
        instances += n
        if g_best > best:
            best = g_best
            witness = {"q": q, "s": s, "r": r, "generators": gens, **g_wit}
    return RatioResult(best, witness, instances)


# --- whole-family sweep ---------------------------------------------------------


@dataclass
class FamilySweep:
    """Maxima and check counters over every (q, s, r) of a sweep."""

    K: dict  # r -> max N / bound
    C: dict  # (r, s) -> max l1 / (q^s prod log H)
    K_witness: dict
    C_witness: dict
    disagreements: int = 0
    counter_mismatches: int = 0
    properness_instances: int = 0
    parseval_rel_err: float = 0.0
    min_l1_over_qs: float = math.inf
    proper_gaps: int = 0
    per_case: list = None


def sweep_families(qs, dims=(1, 2), ranks=(1, 2), log=None) -> FamilySweep:
    """Run properness agreement, counting ratios and l1 ratios over the family."""
    out = FamilySweep({}, {}, {}, {}, per_case=[])
    for q in qs:
        for s in dims:
            for r in ranks:
                data = family_data(q, s, r)
                out.disagreements += data.disagreements
                out.properness_instances += data.tuples * (q - 1) ** r
                kres = counting_ratio_family(data)
                lres, checks = l1_ratio_family(data)
                out.counter_mismatches += kres.counter_mismatches
                if kres.max_ratio > out.K.get(r, 0.0):
                    out.K[r], out.K_witness[r] = kres.max_ratio, kres.witness
                if lres.max_ratio > out.C.get((r, s), 0.0):
                    out.C[(r, s)], out.C_witness[(r, s)] = lres.max_ratio, lres.witness
                out.parseval_rel_err = max(out.parseval_rel_err, checks["parseval_rel_err"])
                out.min_l1_over_qs = min(out.min_l1_over_qs, checks["min_l1_over_qs"])
                out.proper_gaps += checks["proper_gaps"]
                case = {"q": q, "s": s, "r": r, "disagreements": data.disagreements,
                        "counter_mismatches": kres.counter_mismatches, "K": kres.max_ratio, "C": lres.max_ratio, **checks}
                out.per_case.append(case)
                if log:
                    log(case)
                del data
    return out
