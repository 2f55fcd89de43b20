import math

import pytest

from gapsums import harness as hs
from gapsums.characters import primitive_characters, principal_character, quadratic_character
from gapsums.errors import InvariantViolation, UnsupportedModulusError
from gapsums.gap import Gap, is_proper
from gapsums.sums import SumReport, character_sum_over_gap


def small_config(**kw):
    base = dict(q_min=5, q_max=11, moduli="primes", r=(1,))
    base.update(kw)
    return hs.SweepConfig(**base)


def test_sweep_exhaustive_small_primes():
    rows = hs.sweep(small_config())
    assert {r.q for r in rows} == {5, 7, 11}
    assert all(r.chain_holds() for r in rows)
    assert all(math.isfinite(r.ratio) for r in rows)
    # every proper GAP with r = 1 and every primitive character
    n5 = sum(1 for r in rows if r.q == 5)
    assert n5 == hs.proper_gap_count(5, 1) * len(primitive_characters(5))


def test_sweep_exhaustive_needs_no_seed():
    assert not small_config().needs_seed()
    assert small_config(q_max=13).needs_seed()
    with pytest.raises(ValueError):
        hs.sweep(small_config(q_max=13))


def test_empty_range(tmp_path):
    cfg = hs.SweepConfig(q_min=20, q_max=10)
    rows = hs.sweep(cfg)
    assert rows == []
    path = hs.emit_report(rows, "csv", tmp_path / "empty.csv")
    assert path.read_text() == ",".join(hs.CSV_COLUMNS) + "\n"
    assert hs.parse_report(path) == []


def test_sweep_deterministic(tmp_path):
    cfg = hs.SweepConfig(q_min=3, q_max=25, r=(1, 2), gap_samples=3, seed=99)
    a = hs.emit_report(hs.sweep(cfg), "csv", tmp_path / "a.csv").read_bytes()
    b = hs.emit_report(hs.sweep(cfg), "csv", tmp_path / "b.csv").read_bytes()
    assert a == b
    other = hs.SweepConfig(q_min=3, q_max=25, r=(1, 2), gap_samples=3, seed=100)
    assert hs.emit_report(hs.sweep(other), "csv", tmp_path / "c.csv").read_bytes() != a


def test_sweep_polynomial_and_multilinear():
    rows = hs.sweep(hs.SweepConfig(q_min=5, q_max=13, kind="polynomial", degrees=(2, 3), seed=1))
    assert rows and all(r.kind == "polynomial" and r.chain_holds() for r in rows)
    rows = hs.sweep(hs.SweepConfig(q_min=5, q_max=9, kind="multilinear", s=2, r=(1, 2), gap_samples=2, seed=1))
    assert rows and all(r.s == 2 and r.chain_holds() for r in rows)


def test_sweep_aborts_on_violation(monkeypatch):
    monkeypatch.setattr(SumReport, "chain_holds", lambda self, atol=0: False)
    with pytest.raises(InvariantViolation) as exc:
        hs.sweep(small_config(q_max=5))
    assert exc.value.witness["q"] == 5
    assert "inputs" in exc.value.witness


def test_config_validation():
    with pytest.raises(ValueError):
        hs.SweepConfig(kind="nope")
    with pytest.raises(ValueError):
        hs.SweepConfig(kind="character", s=2)
    with pytest.raises(ValueError):
        hs.SweepConfig.from_dict({"q_max": 5, "colour": "red"})
    cfg = hs.SweepConfig.from_dict({"q_max": 9, "r": 2})
    assert cfg.r == (2,)
    assert hs.SweepConfig.from_dict(cfg.to_dict()) == cfg


def brute_force_max(q, r):
    best = 0.0
    for gap in hs._all_proper_gaps(q, 1, r):
        for chi in primitive_characters(q):
            best = max(best, character_sum_over_gap(chi, gap).magnitude)
    return best


def test_extremal_exhaustive_q5():
    res = hs.extremal_search(5, 1, 10**6)
    assert res.exhaustive and not res.is_empty
    assert res.magnitude == pytest.approx(brute_force_max(5, 1), abs=1e-12)
    assert abs(res.reevaluate() - res.magnitude) <= 1e-9
    assert is_proper(res.gap)
    assert res.label.startswith("maximum")


def test_extremal_tie_break_prefers_smallest_key():
    res = hs.extremal_search(5, 1, 10**6)
    # |chi(2) + chi(3)| = 2 ties with {1, 4}; generator 1 sorts first
    assert res.gap.generators == ((1,),)
    assert res.gap.lengths == (2,)
    assert res.gap.base == (2,)


def test_extremal_budget_zero():
    res = hs.extremal_search(7, 1, 0)
    assert res.is_empty and res.label == "empty"
    assert res.to_json()["gap"] is None


def test_extremal_random_deterministic_and_bounded():
    a = hs.extremal_search(13, 2, 300, seed=3)
    b = hs.extremal_search(13, 2, 300, seed=3)
    assert a == b
    assert not a.exhaustive and a.label.startswith("lower bound")
    assert a.budget_used <= 300
    assert abs(a.reevaluate() - a.magnitude) <= 1e-9
    assert a.magnitude <= hs.extremal_search(13, 2, 10**9).magnitude + 1e-9


def test_extremal_random_needs_seed():
    with pytest.raises(ValueError):
        hs.extremal_search(13, 2, 10)


def test_extremal_random_reaches_exhaustive_max_with_budget():
    top = hs.extremal_search(7, 1, 10**6).magnitude
    res = hs.extremal_search(7, 1, 3000, seed=0)
    assert res.magnitude <= top + 1e-9
    assert res.magnitude == pytest.approx(top)


@pytest.mark.parametrize("q,r", [(5, 1), (6, 1), (7, 2), (8, 2), (5, 3)])
def test_proper_gap_count(q, r):
    assert hs.proper_gap_count(q, r) == sum(1 for _ in hs._all_proper_gaps(q, 1, r))


def test_counterexample_examples():
    rep = hs.counterexample_demo(5, 2)
    assert rep.character == quadratic_character(5)
    assert rep.lhs == pytest.approx(2) and rep.rhs == pytest.approx(2)
    assert rep.difference == 0
    assert hs.counterexample_demo(13, 6).difference <= 1e-9
    one = hs.counterexample_demo(13, 1)
    assert one.lhs == 0 and one.rhs == 0


def test_counterexample_multiplicity():
    # h1 - h2 takes the value 0 exactly H times
    rep = hs.counterexample_demo(13, 6)
    assert rep.max_multiplicity == 6


def test_counterexample_errors():
    with pytest.raises(ValueError):
        hs.counterexample_demo(13, 7)
    with pytest.raises(UnsupportedModulusError):
        hs.counterexample_demo(3, 1)  # the only primitive character mod 3 is odd
    with pytest.raises(UnsupportedModulusError):
        hs.counterexample_demo(6, 2)


def test_emit_one_row_format(tmp_path):
    rep = character_sum_over_gap(quadratic_character(7), Gap.line(7, [1], [3], base=1))
    text = hs.emit_report([rep], "csv", tmp_path / "one.csv").read_bytes()
    assert b"\r" not in text
    header, line, tail = text.decode().split("\n")
    assert tail == ""
    fields = line.split(",")
    assert len(header.split(",")) == 12
    assert fields[0] == "character" and fields[4] == "7:3"
    ratio = rep.magnitude / (math.sqrt(7) * math.log(7))
    assert line.endswith("%.12g" % ratio)


def test_emit_none_as_empty(tmp_path):
    rep = character_sum_over_gap(principal_character(5), Gap.line(5, [1], [2], base=1))
    rows = hs.parse_report(hs.emit_report([rep], "csv", tmp_path / "p.csv"))
    assert rows[0]["chain_bound"] is None
    rows = hs.parse_report(hs.emit_report([rep], "jsonl", tmp_path / "p.jsonl"))
    assert rows[0]["chain_bound"] is None


@pytest.mark.parametrize("fmt", ["csv", "jsonl"])
def test_roundtrip(tmp_path, fmt):
    reports = hs.sweep(hs.SweepConfig(q_min=5, q_max=16, r=(1, 2), gap_samples=2, seed=4))
    rows = hs.parse_report(hs.emit_report(reports, fmt, tmp_path / f"r.{fmt}"), fmt)
    assert len(rows) == len(reports)
    for rep, row in zip(reports, rows):
        want = hs.report_row(rep)
        for k in hs.CSV_COLUMNS:
            if k in hs.FLOAT_COLUMNS and want[k] is not None:
                assert row[k] == pytest.approx(want[k], rel=1e-11, abs=1e-11)
            else:
                assert row[k] == want[k]
        assert Gap.from_json(row["gap_json"]) == rep.gap


def test_emit_io_error(tmp_path):
    missing = tmp_path / "no" / "such" / "dir.csv"
    with pytest.raises(OSError) as exc:
        hs.emit_report([], "csv", missing)
    assert str(missing) in str(exc.value)
