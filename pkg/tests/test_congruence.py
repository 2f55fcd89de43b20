import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from gapsums import congruence as cg
from gapsums.errors import PreconditionError


def naive_count(inst):
    """Loop over every y; test each x_i = a_i . y against its interval."""
    q, s = inst.q, inst.s
    total = 0
    for y in itertools.product(range(q), repeat=s):
        ok = True
        for a, iv in zip(inst.generators, inst.intervals):
            x = sum(ai * yi for ai, yi in zip(a, y)) % q
            if not any((iv.lo + k) % q == x for k in range(iv.len)):
                ok = False
                break
        total += ok
    return total


@st.composite
def instances(draw, qmax=12, smax=2, rmax=2):
    q = draw(st.integers(2, qmax))
    s = draw(st.integers(1, smax))
    r = draw(st.integers(1, rmax))
    gens = [tuple(draw(st.integers(0, q - 1)) for _ in range(s)) for _ in range(r)]
    ivs = [(draw(st.integers(-q, 2 * q)), draw(st.integers(0, q))) for _ in range(r)]
    lens = [draw(st.integers(1, q)) for _ in range(r)]
    return cg.make_instance(q, gens, ivs, lens)


def test_examples_counts():
    assert cg.count_solutions_exact(cg.make_instance(5, [(1,)], [(0, 2)], [5])) == 2
    assert cg.count_solutions_exact(cg.make_instance(6, [(2,)], [(0, 6)], [3])) == 6


def test_examples_bounds():
    assert cg.solution_bound(cg.make_instance(5, [(1,)], [(0, 2)], [5])) == pytest.approx(3)
    assert cg.solution_bound(cg.make_instance(6, [(2,)], [(0, 6)], [3])) == pytest.approx(8)


def test_empty_interval_gives_zero():
    assert cg.count_solutions_exact(cg.make_instance(7, [(3,), (1,)], [(2, 0), (0, 7)], [2, 2])) == 0


@given(instances())
@settings(max_examples=300, deadline=None)
def test_exact_matches_naive(inst):
    assert cg.count_solutions_exact(inst) == naive_count(inst)


@given(instances(qmax=30, rmax=1))
@settings(max_examples=300, deadline=None)
def test_residue_walk_matches_exact(inst):
    assert cg.count_solutions_by_residues(inst) == cg.count_solutions_exact(inst)


def test_residue_walk_rank_one_only():
    with pytest.raises(ValueError):
        cg.count_solutions_by_residues(cg.make_instance(5, [(1,), (2,)], [(0, 2), (0, 2)], [2, 2]))


@given(instances(qmax=15))
@settings(max_examples=300, deadline=None)
def test_bound_with_measured_constant(inst):
    if any(not any(a) for a in inst.generators) or not inst.kernel_condition():
        with pytest.raises(PreconditionError):
            cg.solution_bound(inst)
        return
    N = cg.count_solutions_exact(inst)
    assert N <= cg.counting_constant(inst.r) * cg.solution_bound(inst) * (1 + 1e-12)


def test_kernel_condition_failure_raises():
    inst = cg.make_instance(4, [(2,)], [(0, 2)], [3])
    assert not inst.kernel_condition()
    with pytest.raises(PreconditionError):
        cg.solution_bound(inst)


def test_zero_generator_raises():
    with pytest.raises(PreconditionError):
        cg.solution_bound(cg.make_instance(5, [(0,)], [(0, 2)], [2]))


def test_full_intervals_bound_shape():
    q, r = 7, 2
    inst = cg.make_instance(q, [(1, 0), (0, 1)], [(0, q), (0, q)], [q, q])
    assert cg.solution_bound(inst) == pytest.approx((q + 1) ** r)
    assert cg.count_solutions_exact(inst) == q**2


def test_box_interval_wraps():
    iv = cg.BoxInterval(5, 3)
    assert iv.residues(7) == [5, 6, 0]
    assert iv.contains(0, 7) and not iv.contains(1, 7)


@pytest.mark.parametrize("bad", [
    dict(q=5, generators=[(1,)], intervals=[(0, 6)], lengths=[2]),
    dict(q=5, generators=[(1,)], intervals=[(0, 2)], lengths=[0]),
    dict(q=5, generators=[(1,)], intervals=[(0, 2), (0, 2)], lengths=[2]),
])
def test_invalid_instances(bad):
    with pytest.raises(ValueError):
        cg.make_instance(**bad)


def test_constants_are_loaded():
    for r in (1, 2, 3):
        assert 0 < cg.counting_constant(r) < math.inf
