"""Sweeps, extremal searches, the multiset counterexample and report files."""

from __future__ import annotations

import csv
import itertools
import json
import logging
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Callable, Iterable, Iterator

import numpy as np

from .characters import DirichletCharacter, primitive_characters
from .errors import InvariantViolation, ResourceError, SamplingError, UnsupportedModulusError
from .fourier import l1_norm
from .gap import Gap, enumerate_elements, has_short_kernel_vector, is_proper_kernel, random_proper_gap
from .modring import is_prime
from .sums import (
    PolynomialModQ,
    SumReport,
    character_sum_over_gap,
    multilinear_character_sum,
    poly_exp_sum_over_gap,
    poly_sup_norm,
)

log = logging.getLogger(__name__)

KINDS = ("character", "polynomial", "multilinear")
FORMATS = ("csv", "jsonl")
CSV_COLUMNS = (
    "kind", "q", "s", "r", "character_id", "gap_json",
    "sum_re", "sum_im", "magnitude", "chain_bound", "shape_bound", "ratio",
)
FLOAT_COLUMNS = ("sum_re", "sum_im", "magnitude", "chain_bound", "shape_bound", "ratio")
SPACE_GUARD = 10**7
TIE_TOL = 1e-9


def derived_seed(seed: int, *path: int) -> int:
    """A 64-bit key for one sub-stream, fixed by ``seed`` and the integer path."""
    state = np.random.SeedSequence([seed, *path]).generate_state(2, dtype=np.uint64)
    return int(state[0]) << 64 | int(state[1])


def philox(seed: int, *path: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=derived_seed(seed, *path)))


# --- sweep -----------------------------------------------------------------------


@dataclass(frozen=True)
class SweepConfig:
    q_min: int = 3
    q_max: int = 30
    moduli: str = "all"  # "all" or "primes"
    kind: str = "character"
    r: tuple[int, ...] = (1,)
    s: int = 1
    exhaustive_cutoff: int = 2000  # candidate (base, generators, lengths) count
    gap_samples: int = 8
    characters: str = "primitive"  # "primitive" or "sample"
    character_samples: int = 4
    degrees: tuple[int, ...] = (2, 3)
    polynomial_samples: int = 4
    seed: int | None = None
    output: str | None = None
    format: str = "csv"

    def __post_init__(self):
        r = (self.r,) if isinstance(self.r, int) else tuple(self.r)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "degrees", (self.degrees,) if isinstance(self.degrees, int) else tuple(self.degrees))
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.moduli not in ("all", "primes"):
            raise ValueError("moduli must be 'all' or 'primes'")
        if self.characters not in ("primitive", "sample"):
            raise ValueError("characters must be 'primitive' or 'sample'")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if not r or min(r) < 1 or self.s < 1:
            raise ValueError("r and s must be positive")
        if self.kind != "multilinear" and self.s != 1:
            raise ValueError(f"kind {self.kind!r} needs s = 1")
        if self.q_min < 1:
            raise ValueError("q_min must be positive")
        if self.q_max >= self.q_min and self.q_max**self.s > SPACE_GUARD:
            raise ResourceError(f"q_max^s = {self.q_max ** self.s} exceeds {SPACE_GUARD}")
        if min(self.gap_samples, self.character_samples, self.polynomial_samples, self.exhaustive_cutoff) < 0:
            raise ValueError("sample counts and cutoffs must be nonnegative")

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown sweep config keys: {sorted(unknown)}")
        return cls(**d)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def moduli_list(self) -> list[int]:
        qs = range(max(self.q_min, 2), self.q_max + 1)
        if self.moduli == "primes" or self.kind == "polynomial":
            return [q for q in qs if is_prime(q)]
        return list(qs)

    def candidate_count(self, q: int, r: int) -> int:
        """Number of (base, generators, lengths) tuples before the properness filter."""
        return q**self.s * q ** (self.s * r) * (q - 1) ** r

    def needs_seed(self) -> bool:
        if self.kind == "polynomial" or self.characters == "sample":
            return bool(self.moduli_list())
        return any(self.candidate_count(q, r) > self.exhaustive_cutoff for q in self.moduli_list() for r in self.r)


def _all_proper_gaps(q: int, s: int, r: int) -> Iterator[Gap]:
    vecs = list(itertools.product(range(q), repeat=s))
    for gens in itertools.product(vecs, repeat=r):
        for lengths in itertools.product(range(2, q + 1), repeat=r):
            if math.prod(lengths) > q**s or has_short_kernel_vector(q, gens, lengths):
                continue
            for base in vecs:
                yield Gap(q, base, gens, lengths)


def sweep_gaps(config: SweepConfig, q: int, r: int, on_skip: Callable[[str], None] | None = None) -> list[Gap]:
    """The GAPs swept at (q, r): all proper ones below the cutoff, else a seeded sample."""
    s = config.s
    if config.candidate_count(q, r) <= config.exhaustive_cutoff:
        return list(_all_proper_gaps(q, s, r))
    if config.seed is None:
        raise ValueError("a seed is required when GAPs are sampled")
    out = []
    for i in range(config.gap_samples):
        try:
            out.append(random_proper_gap(q, s, r, (2, q), seed=derived_seed(config.seed, 1, q, s, r, i)))
        except SamplingError as exc:
            (on_skip or log.warning)(f"q={q} r={r} sample {i}: {exc}")
    return out


def sweep_characters(config: SweepConfig, q: int) -> list[DirichletCharacter]:
    chars = primitive_characters(q)
    if config.characters == "sample" and len(chars) > config.character_samples:
        rng = philox(config.seed, 2, q)
        pick = np.sort(rng.choice(len(chars), size=config.character_samples, replace=False))
        chars = [chars[i] for i in pick]
    return chars


def sweep_polynomials(config: SweepConfig, q: int) -> list[PolynomialModQ]:
    out = []
    for d in config.degrees:
        if not 2 <= d < q:
            continue
        rng = philox(config.seed, 3, q, d)
        for _ in range(config.polynomial_samples):
            coeffs = [int(c) for c in rng.integers(0, q, size=d)] + [int(rng.integers(1, q))]
            out.append(PolynomialModQ(q, tuple(coeffs)))
    return out


def iter_sweep(config: SweepConfig, on_skip: Callable[[str], None] | None = None) -> Iterator[SumReport]:
    """Rows in deterministic order: q, then r, then GAP, then function.

    Raises InvariantViolation (witness = the row) as soon as a row breaks the
    completion chain.
    """
    if config.needs_seed() and config.seed is None:
        raise ValueError("this sweep samples at random; a seed is required")
    skip = on_skip or log.warning
    for q in config.moduli_list():
        if config.kind == "polynomial":
            funcs = sweep_polynomials(config, q)
            sups = [poly_sup_norm(h) for h in funcs]
        else:
            funcs = sweep_characters(config, q)
        if not funcs:
            continue
        for r in config.r:
            for gap in sweep_gaps(config, q, r, skip):
                try:
                    l1 = l1_norm(gap)
                except ResourceError as exc:
                    skip(f"q={q} r={r} {gap.dumps()}: {exc}")
                    continue
                for i, f in enumerate(funcs):
                    try:
                        if config.kind == "character":
                            row = character_sum_over_gap(f, gap, l1)
                        elif config.kind == "multilinear":
                            row = multilinear_character_sum(f, gap, l1)
                        else:
                            row = poly_exp_sum_over_gap(f, gap, l1, sups[i])
                    except ResourceError as exc:
                        skip(f"q={q} r={r} {gap.dumps()} {f.label}: {exc}")
                        continue
                    if not row.chain_holds():
                        raise InvariantViolation(
                            f"completion chain fails: |sum| = {row.magnitude!r} > {row.chain_bound!r}", row.to_json()
                        )
                    yield row


def sweep(config: SweepConfig, on_skip: Callable[[str], None] | None = None) -> list[SumReport]:
    return list(iter_sweep(config, on_skip))


# --- extremal search -------------------------------------------------------------


@dataclass(frozen=True)
class ExtremalResult:
    q: int
    r: int
    gap: Gap | None
    character: DirichletCharacter | None
    magnitude: float
    ratio: float
    budget_used: int
    exhaustive: bool

    @classmethod
    def empty(cls, q: int, r: int) -> "ExtremalResult":
        return cls(q, r, None, None, 0.0, 0.0, 0, False)

    @property
    def is_empty(self) -> bool:
        return self.gap is None

    @property
    def label(self) -> str:
        if self.is_empty:
            return "empty"
        return "maximum of S(chi, r)" if self.exhaustive else "lower bound on S(chi, r)"

    def reevaluate(self) -> float:
        """|sum| recomputed from the stored witness with the sums module."""
        return character_sum_over_gap(self.character, self.gap).magnitude

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "r": self.r,
            "label": self.label,
            "gap": None if self.gap is None else self.gap.to_json(),
            "character": None if self.character is None else self.character.to_json(),
            "magnitude": self.magnitude,
            "ratio": self.ratio,
            "budget_used": self.budget_used,
            "exhaustive": self.exhaustive,
        }


def _shape(q: int, r: int) -> float:
    return math.sqrt(q) * math.log(q) ** r


def proper_gap_count(q: int, r: int) -> int:
    """Number of proper rank-r GAPs in Z_q with H_i in [2, q], counting all bases."""
    if r == 1:
        # a GAP {a0 + h a} is proper exactly when H <= ord(a) = q / gcd(a, q)
        return q * sum(max(0, q // math.gcd(a, q) - 1) for a in range(q))
    if r == 2:
        from .families import staircases

        _, kern = staircases(q, 1, 2)
        h2 = np.clip(kern[:, 2:].astype(np.int64), 1, q) - 1
        return q * int(h2.sum())
    return sum(1 for _ in _all_proper_gaps(q, 1, r))


class _Best:
    """Running maximum with the (generators, lengths, exponents, base) tie-break."""

    def __init__(self):
        self.mag, self.key, self.item = -1.0, None, None

    def offer(self, mag: float, gap: Gap, chi: DirichletCharacter) -> None:
        key = (gap.generators, gap.lengths, chi.exponents, gap.base)
        if mag > self.mag + TIE_TOL or (abs(mag - self.mag) <= TIE_TOL and key < self.key):
            self.mag, self.key, self.item = mag, key, (gap, chi)


def _magnitudes_all_bases(values: np.ndarray, gap0: Gap) -> np.ndarray:
    """|sum_{a in b + A0} chi(a)| for each character row of ``values`` and every base b."""
    q = gap0.q
    m = np.bincount(enumerate_elements(gap0)[:, 0], minlength=q).astype(float)
    shift = (np.arange(q)[:, None] + np.arange(q)[None, :]) % q  # [b, x] -> x + b
    return np.abs(values[:, shift] @ m)  # (chars, bases)


def extremal_search(q: int, r: int, budget: int, seed: int | None = None, steps: int = 50) -> ExtremalResult:
    """Largest |sum_{a in A} chi(a)| over proper rank-r GAPs A in Z_q and primitive chi.

    Exhaustive when (proper GAP count) x (primitive count) <= budget; otherwise
    seeded random restarts, each followed by up to ``steps`` local moves.
    """
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    if q**2 > SPACE_GUARD:
        raise ResourceError(f"q={q} too large for the extremal search")
    if budget == 0:
        return ExtremalResult.empty(q, r)
    chars = primitive_characters(q)
    if not chars:
        raise UnsupportedModulusError(f"no primitive character mod {q}")
    best = _Best()
    exhaustive = proper_gap_count(q, r) * len(chars) <= budget
    used = 0
    if exhaustive:
        values = np.stack([chi.values for chi in chars])
        for gens in itertools.product(range(q), repeat=r):
            for lengths in itertools.product(range(2, q + 1), repeat=r):
                gap0 = Gap.line(q, gens, lengths)
                if not is_proper_kernel(gap0):
                    continue
                mags = _magnitudes_all_bases(values, gap0)
                used += mags.size
                for c, b in zip(*np.nonzero(mags >= mags.max() - TIE_TOL)):
                    best.offer(float(mags[c, b]), gap0.translate((int(b),)), chars[c])
    else:
        if seed is None:
            raise ValueError("a seed is required beyond the exhaustive cutoff")
        rng = philox(seed, 4, q, r)
        restart = 0
        while used < budget:
            try:
                gap = random_proper_gap(q, 1, r, (2, q), seed=derived_seed(seed, 5, q, r, restart))
            except SamplingError:
                break
            restart += 1
            chi = chars[int(rng.integers(len(chars)))]
            mag = character_sum_over_gap(chi, gap).magnitude
            used += 1
            best.offer(mag, gap, chi)
            for _ in range(steps):
                if used >= budget:
                    break
                i = int(rng.integers(r))
                gens, lengths = list(gap.generators), list(gap.lengths)
                if rng.integers(2):
                    gens[i] = (int(rng.integers(1, q)),)
                else:
                    lengths[i] = int(rng.integers(2, q + 1))
                used += 1
                cand = Gap(q, gap.base, tuple(gens), tuple(lengths))
                if not is_proper_kernel(cand):
                    continue
                m2 = character_sum_over_gap(chi, cand).magnitude
                best.offer(m2, cand, chi)
                if m2 > mag:
                    gap, mag = cand, m2
    if best.item is None:
        return ExtremalResult(q, r, None, None, 0.0, 0.0, used, exhaustive)
    gap, chi = best.item
    # re-evaluate so the stored magnitude is exactly what the sums module reports
    mag = character_sum_over_gap(chi, gap).magnitude
    return ExtremalResult(q, r, gap, chi, mag, mag / _shape(q, r), used, exhaustive)


# --- the multiset counterexample -----------------------------------------------------


@dataclass(frozen=True)
class CounterexampleReport:
    q: int
    H: int
    character: DirichletCharacter
    lhs: complex  # sum over h1, h2 of chi(h1 + h2 (q - 1))
    rhs: complex  # 2 sum_{1 <= n <= H} chi(n) (H - n)
    max_multiplicity: int

    @property
    def difference(self) -> float:
        return abs(self.lhs - self.rhs)

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "H": self.H,
            "character": self.character.to_json(),
            "lhs_re": self.lhs.real,
            "lhs_im": self.lhs.imag,
            "rhs_re": self.rhs.real,
            "rhs_im": self.rhs.imag,
            "difference": self.difference,
            "max_multiplicity": self.max_multiplicity,
        }


def counterexample_multiset(q: int, H: int) -> np.ndarray:
    """Residues of h1 + h2 (q - 1) for 1 <= h1, h2 <= H, with multiplicity."""
    h = np.arange(1, H + 1)
    return (h[:, None] + h[None, :] * (q - 1)).ravel() % q


def counterexample_identity(chi: DirichletCharacter, H: int) -> tuple[complex, complex]:
    """(direct double sum, weighted single sum) for the multiset of size H^2."""
    q = chi.q
    lhs = complex(chi.values[counterexample_multiset(q, H)].sum())
    n = np.arange(1, H + 1)
    rhs = complex(2 * (chi.values[n % q] * (H - n)).sum())
    return lhs, rhs


def even_primitive_characters(q: int) -> list[DirichletCharacter]:
    return [chi for chi in primitive_characters(q) if chi.is_even]


def counterexample_demo(q: int, H: int) -> CounterexampleReport:
    if not 1 <= H <= q / 2:
        raise ValueError(f"H must lie in [1, q/2]; got H={H}, q={q}")
    chars = even_primitive_characters(q)
    if not chars:
        raise UnsupportedModulusError(f"no even primitive character mod {q}")
    chi = chars[0]
    lhs, rhs = counterexample_identity(chi, H)
    mult = int(np.bincount(counterexample_multiset(q, H), minlength=q).max())
    return CounterexampleReport(q, H, chi, lhs, rhs, mult)


# --- report files ----------------------------------------------------------------------


def report_row(report: SumReport) -> dict:
    """The flat row written to CSV and JSON-lines files."""
    return {
        "kind": report.kind,
        "q": report.q,
        "s": report.s,
        "r": report.r,
        "character_id": report.function_label,
        "gap_json": report.gap.dumps(),
        "sum_re": report.sum_value.real,
        "sum_im": report.sum_value.imag,
        "magnitude": report.magnitude,
        "chain_bound": report.chain_bound,
        "shape_bound": report.shape_bound,
        "ratio": report.ratio,
    }


def _fmt(x) -> str:
    return "" if x is None else "%.12g" % x


def _round12(x):
    return None if x is None else float("%.12g" % x)


def _rows(rows: Iterable) -> Iterator[dict]:
    for row in rows:
        yield report_row(row) if isinstance(row, SumReport) else row


def write_report(rows: Iterable, fmt: str, fh) -> None:
    """Write rows (SumReports or row dicts) to an open text stream."""
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    if fmt == "csv":
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in _rows(rows):
            w.writerow([_fmt(row[c]) if c in FLOAT_COLUMNS else row[c] for c in CSV_COLUMNS])
    else:
        for row in _rows(rows):
            out = {c: (_round12(row[c]) if c in FLOAT_COLUMNS else row[c]) for c in CSV_COLUMNS}
            fh.write(json.dumps(out, separators=(",", ":")) + "\n")


def emit_report(rows: Iterable, fmt: str, path) -> Path:
    """Write a CSV or JSON-lines report; LF endings, 12 significant digits."""
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    path = Path(path)
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            write_report(rows, fmt, fh)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write report {path}: {exc.strerror}") from exc
    return path


def parse_report(path, fmt: str | None = None) -> list[dict]:
    """Read a file written by :func:`emit_report` back into typed row dicts."""
    path = Path(path)
    fmt = fmt or ("jsonl" if path.suffix in (".jsonl", ".json") else "csv")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(exc.errno, f"cannot read report {path}: {exc.strerror}") from exc
    rows = []
    if fmt == "csv":
        reader = csv.DictReader(text.splitlines())
        if reader.fieldnames is not None and tuple(reader.fieldnames) != CSV_COLUMNS:
            raise ValueError(f"unexpected columns in {path}: {reader.fieldnames}")
        for raw in reader:
            row = dict(raw)
            for c in ("q", "s", "r"):
                row[c] = int(row[c])
            for c in FLOAT_COLUMNS:
                row[c] = None if row[c] == "" else float(row[c])
            rows.append(row)
    else:
        rows = [json.loads(line) for line in text.splitlines() if line.strip()]
    return rows
