import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, reject, settings, strategies as st

from polypart.errors import PreconditionError
from polypart.incidence import (BoundParams, IncidenceInstance, bound_exponents, count_incidences,
                                generate, grid_lines_2d, incidence_bound, incidence_degrees,
                                level_degrees, quadrics_4d, random_lines_2d, random_points_4d,
                                run_level1, spot_check_hypotheses, st_bound,
                                unit_spheres_3d_embedded)
from polypart.poly import PointSet, Polynomial, evaluate

x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)


def brute_count(inst):
    return sum(evaluate(h, p) == 0 for h in inst.surfaces for p in inst.points)


def test_count_examples():
    P = PointSet([(0, 0), (0, 1), (1, 0), (1, 1)])
    inst = IncidenceInstance(P, [x, x - 1, y, y - 1], 2, 1)
    assert count_incidences(inst) == 8
    assert count_incidences(IncidenceInstance(P, [], 2, 1)) == 0
    assert count_incidences(grid_lines_2d(3)) == 18


@pytest.mark.parametrize("q", range(2, 11))
def test_grid_double_counting(q):
    inst = grid_lines_2d(q)
    per_surface, per_point = incidence_degrees(inst)
    assert count_incidences(inst) == sum(per_surface) == sum(per_point) == 2 * q * q == brute_count(inst)


def test_degree_cap_enforced():
    with pytest.raises(PreconditionError):
        IncidenceInstance(PointSet([(0, 0)]), [x * y], 2, 1)
    with pytest.raises(PreconditionError):
        IncidenceInstance(PointSet([(0, 0)]), [Polynomial.zero(2)], 2, 1)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 30), st.integers(0, 12), st.integers(0, 100))
def test_monotone_in_points_and_surfaces(m, n, seed):
    try:
        inst = random_lines_2d(m, n, seed=seed)
    except PreconditionError:
        reject()  # too few distinct lines through so few points
    c = count_incidences(inst)
    assert c == brute_count(inst)
    fewer = IncidenceInstance(inst.points.subset(range(m - 1)), inst.surfaces, 2, 1)
    assert count_incidences(fewer) <= c
    if n:
        assert count_incidences(IncidenceInstance(inst.points, inst.surfaces[:-1], 2, 1)) <= c


def test_st_bound_examples():
    assert st_bound(8, 8) == 32
    assert st_bound(0, 5) == 5
    assert st_bound(1, 1) == 3


def test_incidence_bound_examples():
    assert bound_exponents(2, 2) == (Fraction(2, 3), Fraction(2, 3))
    assert bound_exponents(4, 2) == (Fraction(6, 7), Fraction(4, 7))
    assert incidence_bound(100, 100, 4, 2) == pytest.approx(100 ** (10 / 7) + 200, rel=1e-14)
    assert incidence_bound(0, 9, 4, 2) == 9
    rng = random.Random(0)
    for _ in range(50):
        m, n = rng.randint(0, 10**5), rng.randint(0, 10**5)
        assert incidence_bound(m, n, 2, 2) == st_bound(m, n)


def test_bound_params():
    bp = BoundParams(4, 2)
    assert bp.alphas == (Fraction(2, 7), Fraction(2, 5), Fraction(2, 3))
    assert bp.betas == (Fraction(1, 7), Fraction(1, 5), Fraction(1, 3))
    for k in range(1, 8):
        a = BoundParams(4, k).alphas
        assert a[0] > 0 and a[2] <= 1 and a[0] < a[1] < a[2] or k == 1


def test_level_degrees():
    n = 10**14
    lv = level_degrees(n, n, 2)
    assert lv.D == pytest.approx(n ** (1 / 7)) and not lv.clamped
    lv = level_degrees(5, 10**6, 2)
    assert lv.D == 24 and lv.clamped
    lv = level_degrees(10, 10**6, 2, l_i=10**6, D_i=1)
    assert lv.E == max(24, (10**6) ** (2 / 5 - 1 / 5))
    lv = level_degrees(10, 10, 2, l_i=10, D_i=2, e_ij=10**9, delta_ij=1)
    assert lv.F == max(24 * lv.E, (10**9) ** (2 / 3) / 10 ** (1 / 3))
    with pytest.raises(PreconditionError):
        level_degrees(0, 3, 2)


def test_generators_are_seeded_and_documented():
    a = quadrics_4d(50, 20, seed=3)
    b = quadrics_4d(50, 20, seed=3)
    assert a.points == b.points and a.surfaces == b.surfaces
    assert a.m == 50 and a.n == 20 and a.c == 2
    assert all(h.degree == 2 for h in a.surfaces)
    assert a.notes
    assert count_incidences(random_points_4d(10, 0)) == 0


def test_quadrics_pair_cap_and_finiteness_spot_check():
    inst = quadrics_4d(40, 12, seed=5)
    rep = spot_check_hypotheses(inst, finite_samples=1, seed=1)
    assert rep.degree_cap and rep.k_subset_cap and rep.finite_ok
    # independent recount of the pair cap
    on = [[i for i, p in enumerate(inst.points) if evaluate(h, p) == 0] for h in inst.surfaces]
    pairs = {}
    for s in on:
        assert len(s) >= 3
        for pr in itertools.combinations(s, 2):
            pairs[pr] = pairs.get(pr, 0) + 1
    assert max(pairs.values()) <= 2


def test_spheres_family():
    inst = unit_spheres_3d_embedded(40, 6, seed=2)
    assert inst.d == 3 and count_incidences(inst) >= 40
    rep = spot_check_hypotheses(inst)
    assert rep.degree_cap and rep.k_subset_cap


def test_generate_dispatch():
    assert generate("grid_lines_2d", q=4).m == 16
    with pytest.raises(PreconditionError):
        generate("nope")
    with pytest.raises(PreconditionError):
        generate("grid_lines_2d", r=3)


def test_level1_reports():
    inst = quadrics_4d(60, 10, seed=1)
    rep = run_level1(inst)
    assert rep.branch == "clamped" and rep.D == 24
    assert rep.conserved and rep.max_cell <= rep.balance_bound
    assert sum(rep.cells) + rep.m0 == 60
    assert sum(rep.cell_incidences) + rep.residue_incidences == rep.count
    empty = IncidenceInstance(inst.points, [], 2, 2)
    rep = run_level1(empty)
    assert rep.count == 0 and set(rep.cell_incidences) <= {0}
    with pytest.raises(PreconditionError):
        run_level1(grid_lines_2d(3))
