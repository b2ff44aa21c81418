"""Point-hypersurface incidence instances, brute-force counting and bounds."""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PreconditionError
from .linalg import nullspace
from .partition import partition
from .poly import PointSet, Polynomial, as_point_set, signs
from .veronese import VeroneseBasis, homogeneous_rows


@dataclass
class IncidenceInstance:
    """Points and hypersurfaces (zero sets of ``surfaces``) in R^d.

    ``k`` and ``c`` are the declared parameters: every surface has degree
    at most ``c`` and any ``k`` distinct points lie on at most ``c`` of the
    surfaces. ``notes`` records why the family satisfies this.
    """

    points: PointSet
    surfaces: list
    k: int
    c: int
    family: str = "custom"
    params: dict = field(default_factory=dict)
    notes: str = ""

    def __post_init__(self):
        self.points = as_point_set(self.points)
        for h in self.surfaces:
            if h.dimension != self.points.dimension:
                raise PreconditionError("surface and point dimensions differ")
            if h.is_zero():
                raise PreconditionError("the zero polynomial is not a hypersurface")
            if h.degree > self.c:
                raise PreconditionError(f"surface of degree {h.degree} exceeds the cap {self.c}")

    @property
    def d(self) -> int:
        return self.points.dimension

    @property
    def m(self) -> int:
        return len(self.points)

    @property
    def n(self) -> int:
        return len(self.surfaces)

    def incidence_matrix(self) -> list[list[bool]]:
        """Row per surface, column per point."""
        return [[s == 0 for s in signs(h, self.points.points)] for h in self.surfaces]


def count_incidences(inst: IncidenceInstance) -> int:
    return sum(sum(row) for row in inst.incidence_matrix())


def incidence_degrees(inst: IncidenceInstance) -> tuple[list[int], list[int]]:
    """Points per surface and surfaces per point."""
    M = inst.incidence_matrix()
    per_surface = [sum(row) for row in M]
    per_point = [sum(col) for col in zip(*M)] if M else [0] * inst.m
    return per_surface, per_point


def _rpow(m: int, a: Fraction):
    """``m ** a``, exact when the result is an integer."""
    v = m ** a.numerator
    r = math.isqrt(v) if a.denominator == 2 else round(math.exp(math.log(v) / a.denominator))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** a.denominator == v:
            return cand
    return math.exp(math.log(v) / a.denominator)


def _power_sum(m, n, a: Fraction, b: Fraction):
    if m == 0 or n == 0:
        return m + n
    return _rpow(m, a) * _rpow(n, b) + m + n


def st_bound(m: int, n: int):
    """``m^(2/3) n^(2/3) + m + n``, exact when the powers are integers."""
    if m < 0 or n < 0:
        raise PreconditionError("m and n must be nonnegative")
    return _power_sum(m, n, Fraction(2, 3), Fraction(2, 3))


def incidence_bound(m: int, n: int, d: int, k: int):
    """``m^(1 - (k-1)/(dk-1)) n^(1 - (d-1)/(dk-1)) + m + n`` with constant 1.

    Integer when every power is an exact integer, float otherwise.
    """
    if d < 2 or k < 1:
        raise PreconditionError("need d >= 2 and k >= 1")
    if m < 0 or n < 0:
        raise PreconditionError("m and n must be nonnegative")
    return _power_sum(m, n, *bound_exponents(d, k))


def bound_exponents(d: int, k: int) -> tuple[Fraction, Fraction]:
    q = d * k - 1
    return 1 - Fraction(k - 1, q), 1 - Fraction(d - 1, q)


@dataclass(frozen=True)
class BoundParams:
    d: int
    k: int

    def __post_init__(self):
        if self.k < 1 or self.d < 2:
            raise PreconditionError("need d >= 2 and k >= 1")

    def level(self, j: int) -> tuple[Fraction, Fraction]:
        """Exponents (alpha_j, beta_j) for level j = 1, 2, 3."""
        if j not in (1, 2, 3):
            raise ValueError("levels are 1, 2, 3")
        q = (5 - j) * self.k - 1
        return Fraction(self.k, q), Fraction(1, q)

    @property
    def alphas(self):
        return tuple(self.level(j)[0] for j in (1, 2, 3))

    @property
    def betas(self):
        return tuple(self.level(j)[1] for j in (1, 2, 3))


@dataclass(frozen=True)
class LevelDegrees:
    D: float
    E: float | None
    F: float | None
    clamped: bool


def level_degrees(m, n, k: int, l_i=None, D_i=None, e_ij=None, delta_ij=None) -> LevelDegrees:
    """Partition degrees of the three levels.

    E is computed when ``l_i`` and ``D_i`` are given, F when ``e_ij`` and
    ``delta_ij`` are given as well. ``clamped`` says D hit its floor 24.
    """
    if m <= 0 or n <= 0:
        raise PreconditionError("m and n must be positive")
    bp = BoundParams(4, k)
    (a1, b1), (a2, b2), (a3, b3) = (bp.level(j) for j in (1, 2, 3))
    raw = m ** float(a1) / n ** float(b1)
    D = max(24.0, raw)
    E = F = None
    if l_i is not None and D_i is not None:
        if l_i <= 0 or D_i <= 0:
            raise PreconditionError("l_i and D_i must be positive")
        E = max(24.0 * D_i, (l_i / D_i) ** float(a2) / n ** float(b2))
        if e_ij is not None and delta_ij is not None:
            if e_ij <= 0 or delta_ij <= 0:
                raise PreconditionError("e_ij and delta_ij must be positive")
            F = max(24.0 * E, (e_ij / delta_ij) ** float(a3) / n ** float(b3))
    return LevelDegrees(D, E, F, raw <= 24.0)


# generators -----------------------------------------------------------------

def grid_lines_2d(q: int) -> IncidenceInstance:
    """The q x q integer grid with its q horizontal and q vertical lines.

    Two distinct points share at most one line and two lines meet in at
    most one point, so k = 2, c = 1.
    """
    if q < 1:
        raise PreconditionError("q must be positive")
    pts = [(i, j) for i in range(q) for j in range(q)]
    x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    lines = [x - i for i in range(q)] + [y - j for j in range(q)]
    return IncidenceInstance(PointSet(pts), lines, 2, 1, "grid_lines_2d", {"q": q},
                             "two points span one line; distinct lines meet once")


def _line_through(p, q) -> Polynomial:
    (x1, y1), (x2, y2) = p, q
    x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    return ((y2 - y1) * (x - x1) - (x2 - x1) * (y - y1)).primitive()


def random_lines_2d(m: int, n: int, seed: int = 0, size: int = 10) -> IncidenceInstance:
    """Distinct random grid points and distinct lines through pairs of them."""
    if m < 2 and n > 0:
        raise PreconditionError("lines need at least two points")
    if m > (2 * size + 1) ** 2:
        raise PreconditionError("grid too small for that many distinct points")
    rng = random.Random(seed)
    pts: list = []
    seen = set()
    while len(pts) < m:
        p = (rng.randint(-size, size), rng.randint(-size, size))
        if p not in seen:
            seen.add(p)
            pts.append(p)
    lines: list = []
    have = set()
    tries = 0
    while len(lines) < n:
        tries += 1
        if tries > 100 * (n + 10):
            raise PreconditionError("could not find enough distinct lines")
        a, b = rng.sample(range(m), 2)
        h = _line_through(pts[a], pts[b])
        key = h.to_inline()
        if key not in have:
            have.add(key)
            lines.append(h)
    return IncidenceInstance(PointSet(pts), lines, 2, 1, "random_lines_2d",
                             {"m": m, "n": n, "seed": seed},
                             "distinct lines share at most one point")


def _rational_unit_vector(rng: random.Random, size: int = 6) -> tuple:
    """Inverse stereographic projection of a random rational point."""
    u = Fraction(rng.randint(-size, size), rng.randint(1, size))
    v = Fraction(rng.randint(-size, size), rng.randint(1, size))
    s = u * u + v * v + 1
    return (2 * u / s, 2 * v / s, (u * u + v * v - 1) / s)


def unit_spheres_3d_embedded(m: int, n: int, seed: int = 0, size: int = 3) -> IncidenceInstance:
    """Unit spheres in R^3 and rational points placed on them.

    Sphere centers are distinct integer points. Each point is put on a
    randomly chosen sphere through a rational unit vector, so incidences
    are plentiful. Three distinct unit spheres meet in at most two points
    (finite intersection), and three points lie on at most two unit
    spheres, hence k = 3, c = 2.
    """
    if n < 1 and m > 0:
        raise PreconditionError("points are placed on spheres; need n >= 1")
    rng = random.Random(seed)
    centers: list = []
    seen = set()
    while len(centers) < n:
        c = tuple(rng.randint(-size, size) for _ in range(3))
        if c not in seen:
            seen.add(c)
            centers.append(c)
        elif len(seen) >= (2 * size + 1) ** 3:
            raise PreconditionError("too many spheres for the center grid")
    pts: list = []
    pset = set()
    while len(pts) < m:
        c = centers[rng.randrange(n)]
        u = _rational_unit_vector(rng)
        p = tuple(Fraction(ci) + ui for ci, ui in zip(c, u))
        if p not in pset:
            pset.add(p)
            pts.append(p)
    xs = [Polynomial.variable(3, i) for i in range(3)]
    spheres = []
    for c in centers:
        f = Polynomial.constant(3, -1)
        for x, ci in zip(xs, c):
            f = f + (x - ci) ** 2
        spheres.append(f)
    return IncidenceInstance(PointSet(pts, 3), spheres, 3, 2, "unit_spheres_3d_embedded",
                             {"m": m, "n": n, "seed": seed},
                             "three unit spheres meet in at most two points")


def _quadric_through(points, rng: random.Random, span: int = 3) -> Polynomial:
    """Random degree-2 polynomial vanishing on the given points."""
    rows = homogeneous_rows(points, 2)
    basis = nullspace(rows, len(rows[0]))
    vb = VeroneseBasis(len(points[0]), 2)
    while True:
        coeffs = [0] * len(rows[0])
        for vec in basis:
            w = rng.randint(-span, span)
            if w:
                coeffs = [a + w * b for a, b in zip(coeffs, vec)]
        g = vb.polynomial(coeffs)
        if not g.is_zero() and g.degree == 2:
            return g.primitive()


def quadrics_4d(m: int, n: int, k: int = 2, seed: int = 0, size: int = 6) -> IncidenceInstance:
    """Random integer points in R^4 and random quadrics through 3 of them each.

    The declared cap is c = 2. Triples are drawn so that each pair of
    points is forced onto at most two quadrics; a quadric that picks up
    extra points by accident is redrawn if some k-subset of its points
    would then lie on more than c quadrics. Four random quadrics meet in
    finitely many points for generic coefficients; see
    :func:`spot_check_hypotheses` for the sampled verification.
    """
    if k < 1:
        raise PreconditionError("k must be positive")
    if n > 0 and m < 3:
        raise PreconditionError("each quadric needs three points")
    c = 2
    rng = random.Random(seed)
    pts: list = []
    seen = set()
    while len(pts) < m:
        p = tuple(rng.randint(-size, size) for _ in range(4))
        if p not in seen:
            seen.add(p)
            pts.append(p)
    P = PointSet(pts, 4)
    used: Counter = Counter()
    ksets: Counter = Counter()
    surfaces: list = []
    tries = 0
    while len(surfaces) < n:
        tries += 1
        if tries > 200 * (n + 10):
            raise PreconditionError("could not place enough quadrics under the pair cap")
        tri = sorted(rng.sample(range(m), 3))
        pairs = list(itertools.combinations(tri, 2))
        if any(used[pr] >= 2 for pr in pairs):
            continue
        g = _quadric_through([pts[i] for i in tri], rng)
        on = [i for i, s in enumerate(signs(g, P.points)) if s == 0]
        subs = list(itertools.combinations(on, k))
        if any(ksets[s] >= c for s in subs) or g in surfaces:
            continue
        used.update(pairs)
        ksets.update(subs)
        surfaces.append(g)
    return IncidenceInstance(P, surfaces, k, c, "quadrics_4d",
                             {"m": m, "n": n, "k": k, "seed": seed},
                             "k-subsets capped at c by construction; generic quadrics meet finitely")


def random_points_4d(m: int, n: int = 0, seed: int = 0, size: int = 20) -> IncidenceInstance:
    """Random integer points with ``n`` random hyperplanes (rarely incident).

    Four points in general position lie on at most one hyperplane and
    four generic hyperplanes meet in one point: k = 4, c = 1.
    """
    rng = random.Random(seed)
    pts = [tuple(rng.randint(-size, size) for _ in range(4)) for _ in range(m)]
    xs = [Polynomial.variable(4, i) for i in range(4)]
    planes = []
    while len(planes) < n:
        coeffs = [rng.randint(-5, 5) for _ in range(5)]
        if not any(coeffs[:4]):
            continue
        h = Polynomial.constant(4, coeffs[4])
        for a, x in zip(coeffs, xs):
            h = h + a * x
        planes.append(h)
    return IncidenceInstance(PointSet(pts, 4), planes, 4, 1, "random_points_4d",
                             {"m": m, "n": n, "seed": seed},
                             "generic hyperplanes; four points span at most one")


FAMILIES = {
    "grid_lines_2d": grid_lines_2d,
    "random_lines_2d": random_lines_2d,
    "unit_spheres_3d_embedded": unit_spheres_3d_embedded,
    "quadrics_4d": quadrics_4d,
    "random_points_4d": random_points_4d,
}


def generate(family: str, **params) -> IncidenceInstance:
    try:
        fn = FAMILIES[family]
    except KeyError:
        raise PreconditionError(
            f"unknown family {family!r}; choose from {', '.join(sorted(FAMILIES))}") from None
    try:
        return fn(**params)
    except TypeError as exc:
        raise PreconditionError(f"bad parameters for {family}: {exc}") from exc


# hypothesis checks ----------------------------------------------------------

@dataclass(frozen=True)
class HypothesisReport:
    degree_cap: bool
    k_subset_cap: bool
    max_k_subset: int
    finite_samples: int
    finite_ok: bool


def _is_finite_intersection(polys) -> bool:
    import sympy

    d = polys[0].dimension
    xs = sympy.symbols(f"x0:{d}")
    exprs = []
    for h in polys:
        e = 0
        for exps, c in h.items():
            e += sympy.Rational(c.numerator, c.denominator) * sympy.prod(
                [x ** a for x, a in zip(xs, exps)])
        exprs.append(e)
    G = sympy.groebner(exprs, *xs, order="grevlex")
    return G.is_zero_dimensional


def spot_check_hypotheses(inst: IncidenceInstance, finite_samples: int = 0,
                          seed: int = 0) -> HypothesisReport:
    """Check the degree and k-subset caps exactly; sample the finiteness condition.

    The k-subset count is exact. Finiteness is tested on
    ``finite_samples`` random groups of d surfaces with a Groebner basis,
    which is only practical for small degrees.
    """
    degree_cap = all(h.degree <= inst.c for h in inst.surfaces)
    M = inst.incidence_matrix()
    ksets: Counter = Counter()
    for row in M:
        on = [i for i, b in enumerate(row) if b]
        ksets.update(itertools.combinations(on, inst.k))
    worst = max(ksets.values(), default=0)
    rng = random.Random(seed)
    finite_ok = True
    done = 0
    if inst.n >= inst.d:
        for _ in range(finite_samples):
            group = [inst.surfaces[i] for i in rng.sample(range(inst.n), inst.d)]
            finite_ok &= _is_finite_intersection(group)
            done += 1
    return HypothesisReport(degree_cap, worst <= inst.c, worst, done, finite_ok)


# level-one experiment -------------------------------------------------------

@dataclass
class Level1Report:
    m: int
    n: int
    k: int
    d: int
    D: float
    degree: int
    branch: str
    count: int
    bound: float
    ratio: float
    stages: int
    degrees: list
    max_cell: int
    balance_bound: int
    cells: list
    cell_incidences: list
    m0: int
    residue_incidences: int
    conserved: bool
    seed: int

    def items(self):
        return [
            ("m", self.m), ("n", self.n), ("k", self.k), ("d", self.d),
            ("D", repr(self.D)), ("degree", self.degree), ("branch", self.branch),
            ("count", self.count), ("bound", repr(self.bound)), ("ratio", repr(self.ratio)),
            ("stages", self.stages), ("degrees", " ".join(map(str, self.degrees))),
            ("max_cell", self.max_cell), ("balance_bound", self.balance_bound),
            ("cell_count", len(self.cells)),
            ("cells", " ".join(map(str, self.cells))),
            ("cell_incidences", " ".join(map(str, self.cell_incidences))),
            ("m0", self.m0), ("residue_incidences", self.residue_incidences),
            ("conserved", self.conserved), ("seed", self.seed),
        ]


def run_level1(inst: IncidenceInstance, seed: int = 0) -> Level1Report:
    """Partition the points at the first-level degree D and tabulate incidences per cell."""
    if inst.d != 4:
        raise PreconditionError("the level-one experiment is defined for R^4")
    if inst.m == 0:
        raise PreconditionError("no points")
    count = count_incidences(inst)
    n_eff = max(inst.n, 1)
    lv = level_degrees(inst.m, n_eff, inst.k)
    degree = math.floor(lv.D)
    res = partition(inst.points, degree, seed=seed)
    per_point = [0] * inst.m
    for row in inst.incidence_matrix():
        for i, b in enumerate(row):
            per_point[i] += b
    keys = sorted(res.cells)
    cells = [len(res.cells[key]) for key in keys]
    cell_inc = [sum(per_point[i] for i in res.cells[key]) for key in keys]
    bound = incidence_bound(inst.m, inst.n, 4, inst.k)
    return Level1Report(
        m=inst.m, n=inst.n, k=inst.k, d=4, D=lv.D, degree=degree,
        branch="clamped" if lv.clamped else "unclamped",
        count=count, bound=bound, ratio=count / bound if bound else 0.0,
        stages=res.stages, degrees=res.degrees, max_cell=res.max_cell,
        balance_bound=res.balance_bound, cells=cells, cell_incidences=cell_inc,
        m0=len(res.residue), residue_incidences=sum(per_point[i] for i in res.residue),
        conserved=res.conserved(), seed=seed)
