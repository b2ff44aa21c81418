import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from polypart.acceptance import nesting_holds, partition_contract, regime_ok
from polypart.errors import PreconditionError, SearchExhausted
from polypart.partition import (classify, floor_log2, iroot_floor, partition,
                                partition_on_variety, schedule_full_space, schedule_variety)
from polypart.poly import Polynomial, evaluate
from polypart.variety import linear_subspace
from polypart.veronese import binomial


def degrees(entries):
    return [e.degree for e in entries]


def test_full_space_schedule_examples():
    assert degrees(schedule_full_space(2, 1)) == [1]
    assert degrees(schedule_full_space(2, 4)) == [1, 1, 2]
    assert degrees(schedule_full_space(1, 3)) == [1, 2]
    with pytest.raises(PreconditionError):
        schedule_full_space(2, 0)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(1, 40))
def test_full_space_schedule_is_greedy_and_fits(d, ell):
    entries = schedule_full_space(d, ell)
    assert sum(degrees(entries)) <= ell
    for e in entries:
        assert binomial(e.degree + d, d) - 1 >= 2 ** e.stage
        assert e.degree == 1 or binomial(e.degree - 1 + d, d) - 1 < 2 ** e.stage
    # maximal: the next stage would not fit
    i = len(entries)
    nxt = 1
    while binomial(nxt + d, d) - 1 < 2 ** i:
        nxt += 1
    assert sum(degrees(entries)) + nxt > ell


def test_exact_integer_helpers():
    assert iroot_floor(Fraction(100, 1), 2) == 10
    assert iroot_floor(Fraction(99, 1), 2) == 9
    assert iroot_floor(Fraction(1, 2), 3) == 0
    assert floor_log2(Fraction(1, 16)) == -4
    assert floor_log2(Fraction(100, 16)) == 2
    assert floor_log2(Fraction(17, 16)) == 0
    for q in [Fraction(3, 7), Fraction(10**30 + 1), Fraction(1, 10**20)]:
        t = floor_log2(q)
        assert Fraction(2) ** t <= q < Fraction(2) ** (t + 1)


def test_variety_schedule_examples():
    s = schedule_variety(4, 1, 1, 24)
    assert (s.eta, s.s0, s.s1, s.t, s.entries) == (1, -4.0, -4.0, -4, ())
    s = schedule_variety(4, 1, 1, 96)
    assert s.eta == 10 and s.t == 2 and degrees(s.entries) == [4, 5, 8]
    assert {e.regime for e in s.entries} == {"codim2"}
    s = schedule_variety(4, 2, 3, 100)
    assert s.eta == Fraction(13, 2) and s.t == 3
    assert s.s0 == 0.0 and s.pow_s1 == Fraction(27, 8)
    assert degrees(s.entries) == [2, 2, 3, 4]
    assert [e.regime for e in s.entries] == ["hypersurface", "hypersurface", "codim2", "codim2"]


def test_variety_schedule_preconditions():
    with pytest.raises(PreconditionError):
        schedule_variety(4, 1, 1, 23)
    with pytest.raises(PreconditionError):
        schedule_variety(4, 3, 2, 200)
    with pytest.raises(PreconditionError):
        schedule_variety(4, 1, 1, 96, c1=Fraction(1, 8))
    with pytest.raises(PreconditionError):
        schedule_variety(2, 1, 1, 96, codim=2)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 5), st.integers(1, 4), st.integers(0, 4), st.integers(0, 400))
def test_every_entry_meets_its_regime_or_is_flagged(d, delta1, extra, bump):
    delta2 = delta1 + extra
    ell = 6 * d * delta2 + bump
    s = schedule_variety(d, delta1, delta2, ell)
    assert s.t == (floor_log2(Fraction(1, 2 ** d) * delta1 * delta2 * s.eta ** (d - 2))
                   if s.eta > 0 else -1)
    assert len(s.entries) == max(s.t + 1, 0)
    for e in s.entries:
        assert regime_ok(e, delta1, delta2, s.eta)
        assert e.clamped or e.degree >= 1


def test_lower_codimension_schedules():
    s1 = schedule_variety(3, 2, 2, 72, codim=1)
    assert {e.regime for e in s1.entries} <= {"full", "hypersurface"}
    s0 = schedule_variety(2, 1, 1, 24, codim=0)
    assert {e.regime for e in s0.entries} == {"full"}


def test_classify_examples():
    x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    cells, res = classify([(1, 2)], [x - Fraction(1, 2), y - 3])
    assert cells == {(1, -1): (0,)} and res == ()
    cells, res = classify([(1, 2), (0, 0)], [x - 1])
    assert res == (0,) and cells == {(-1,): (1,)}
    cells, res = classify([(1, 2), (3, 4)], [])
    assert cells == {(): (0, 1)}


def test_two_points_one_stage():
    res = partition([(0, 0), (1, 0)], 1)
    assert res.stages == 1 and res.max_cell <= 1 and res.conserved()


def test_sixteen_points_three_stages():
    rng = random.Random(16)
    P = [(Fraction(rng.randint(-999, 999), 37), Fraction(rng.randint(-999, 999), 41)) for _ in range(16)]
    res = partition(P, 4, seed=3)
    assert res.stages == 3 and res.max_cell <= 2
    ok, detail = partition_contract(res, 16, 4)
    assert ok, detail


def test_repeated_point():
    res = partition([(2, 5)] * 9, 4)
    assert res.conserved() and res.max_cell <= 9
    assert len(res.residue) + res.max_cell == 9


def test_partition_determinism_and_seed_dependence():
    rng = random.Random(0)
    P = [(rng.randint(-500, 500), rng.randint(-500, 500)) for _ in range(100)]
    a, b = partition(P, 6, seed=1), partition(P, 6, seed=1)
    assert a.polynomials == b.polynomials and a.cells == b.cells


@settings(max_examples=15, deadline=None)
@given(st.lists(st.tuples(st.integers(-30, 30), st.integers(-30, 30)), min_size=1, max_size=60),
       st.integers(1, 7), st.integers(0, 1000))
def test_partition_contract_property(pts, ell, seed):
    res = partition(pts, ell, seed=seed)
    ok, detail = partition_contract(res, len(pts), ell)
    assert ok, detail


def test_partition_in_three_dimensions():
    rng = random.Random(33)
    P = [tuple(Fraction(rng.randint(-100, 100), 7) for _ in range(3)) for _ in range(300)]
    res = partition(P, 6, seed=0)
    ok, detail = partition_contract(res, 300, 6)
    assert ok, detail


def test_search_failure_carries_partial_result():
    rng = random.Random(2)
    P = [(rng.randint(-100, 100), rng.randint(-100, 100)) for _ in range(64)]
    with pytest.raises(SearchExhausted) as err:
        partition(P, 8, seed=0, max_iterations=0, restarts=1)
    part = err.value.partial
    assert part is not None and part.conserved()


def _plane_points(m, seed):
    rng = random.Random(seed)
    return [(Fraction(rng.randint(-500, 500), 50), Fraction(rng.randint(-500, 500), 50), 0, 0)
            for _ in range(m)]


def test_variety_partition_hundred_points():
    X = linear_subspace(4, 2)
    res = partition_on_variety(_plane_points(100, 4), X, 96, seed=0)
    t = len(schedule_variety(4, 1, 1, 96).entries)
    assert res.kernel_stage is None
    assert res.stages == t and res.max_cell <= math.ceil(100 / 2 ** t)
    ok, detail = partition_contract(res, 100, 96)
    assert ok, detail
    # every stage polynomial cuts the plane properly
    samples = X.sample(20, seed=9)
    for g in res.polynomials:
        assert any(evaluate(g, p) != 0 for p in samples)


def test_kernel_fallback_on_collinear_points():
    X = linear_subspace(4, 2)
    pts = [(i, 2 * i, 0, 0) for i in range(5)]
    res = partition_on_variety(pts, X, 24, seed=0)
    assert res.kernel_stage is not None
    g = res.polynomials[0]
    assert not g.is_zero() and all(evaluate(g, p) == 0 for p in pts)
    assert sorted(res.residue) == list(range(5)) and res.cells == {}
    assert any(evaluate(g, p) != 0 for p in X.sample(10))


def test_single_point_on_variety():
    res = partition_on_variety([(1, 1, 0, 0)], linear_subspace(4, 2), 24)
    assert res.conserved() and res.max_cell <= 1


def test_variety_preconditions():
    X = linear_subspace(4, 2)
    with pytest.raises(PreconditionError):
        partition_on_variety([(1, 1, 1, 0)], X, 96)
    with pytest.raises(PreconditionError):
        partition_on_variety([(1, 1, 0, 0)], X, 23)
    with pytest.raises(PreconditionError):
        partition_on_variety([(1, 1, 0)], X, 96)


def test_nesting_checker_on_quadrants():
    x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    P = [(1, 1), (-1, 1), (1, -1), (-1, -1)]
    assert nesting_holds(P, [x, y])
