"""Polynomial partitioning by iterated ham-sandwich cuts.

Stage ``i`` bisects every current cell with one polynomial of degree
``l_i`` found in the degree-``l_i`` Veronese lift. Cells are the sign
patterns of the stage polynomials; points on any stage polynomial go to
the residue.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import CapacityTooSmall, PreconditionError, SearchExhausted
from .hamsandwich import lift_and_bisect_cut
from .poly import PointSet, Polynomial, as_point_set, signs
from .variety import VarietySpec, estimate_variety_hilbert
from .veronese import _TrackedBasis, binomial, homogeneous_rows, kernel_polynomial

log = logging.getLogger(__name__)

FULL, HYPERSURFACE, CODIM2, FALLBACK = "full", "hypersurface", "codim2", "fallback"


@dataclass(frozen=True)
class ScheduleEntry:
    stage: int
    target_sets: int
    degree: int
    regime: str
    clamped: bool = False


@dataclass(frozen=True)
class VarietySchedule:
    """``s0``, ``s1`` are base-2 logs of the exact thresholds ``pow_s0``, ``pow_s1`` (None if absent)."""

    eta: Fraction
    s0: float
    s1: float
    t: int
    entries: tuple
    pow_s0: Fraction | None = None
    pow_s1: Fraction | None = None


def iroot_floor(q: Fraction, k: int) -> int:
    """Largest integer n >= 0 with n**k <= q."""
    q = Fraction(q)
    if q < 1:
        return 0
    n = int(math.floor(float(q) ** (1.0 / k)))
    while n ** k * q.denominator > q.numerator:
        n -= 1
    while (n + 1) ** k * q.denominator <= q.numerator:
        n += 1
    return n


def floor_log2(q: Fraction) -> int:
    """Largest integer t (possibly negative) with 2**t <= q."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("log of a nonpositive number")
    t = q.numerator.bit_length() - q.denominator.bit_length()
    while Fraction(2) ** t > q:
        t -= 1
    while Fraction(2) ** (t + 1) <= q:
        t += 1
    return t


def _log2(q: Fraction) -> float:
    try:
        return math.log2(float(q))
    except OverflowError:
        return math.log2(q.numerator) - math.log2(q.denominator)


def schedule_full_space(d: int, ell: int) -> list[ScheduleEntry]:
    """Greedy stages: the smallest degree whose lifted capacity holds 2^i sets, while the degrees fit in ``ell``."""
    if ell < 1:
        raise PreconditionError("degree budget must be >= 1")
    entries = []
    total = 0
    i = 0
    while True:
        need = 2 ** i
        deg = 1
        while binomial(deg + d, d) - 1 < need:
            deg += 1
        if total + deg > ell:
            return entries
        entries.append(ScheduleEntry(i, need, deg, FULL))
        total += deg
        i += 1


def schedule_variety(d: int, delta1: int, delta2: int, ell: int, c1=None,
                     codim: int = 2) -> VarietySchedule:
    """Three-regime degree schedule for partitioning on a variety.

    ``c1`` defaults to ``2^-d``. Logarithms are base 2. Degrees that
    fall outside their regime's window are clamped into it and flagged.
    """
    if codim not in (0, 1, 2):
        raise PreconditionError("only codimension 0, 1 or 2 is supported")
    if not 1 <= delta1 <= delta2:
        raise PreconditionError("need 1 <= delta1 <= delta2")
    if ell < 6 * d * delta2:
        raise PreconditionError(f"degree {ell} below 6*d*delta2 = {6 * d * delta2}")
    c1 = Fraction(1, 2 ** d) if c1 is None else Fraction(c1)
    if not 0 < c1 <= Fraction(1, 2 ** d):
        raise PreconditionError("c1 must lie in (0, 2^-d]")
    if codim == 2 and d < 3:
        raise PreconditionError("codimension 2 needs d >= 3")
    eta = Fraction(ell, 2 * d) - 2 * delta2
    inf = float("inf")
    if codim == 2:
        a0, a1 = c1 * delta1 ** d, c1 * delta1 * delta2 ** (d - 1)
        top = c1 * delta1 * delta2 * eta ** (d - 2)
    elif codim == 1:
        a0, a1 = c1 * delta1 ** d, None
        top = c1 * delta1 * eta ** (d - 1)
    else:
        a0 = a1 = None
        top = c1 * eta ** d
    s0 = _log2(a0) if a0 is not None else inf
    s1 = _log2(a1) if a1 is not None else inf
    t = floor_log2(top) if top > 0 else -1
    entries = []
    for i in range(0, t + 1):
        p = Fraction(2) ** i
        if a0 is None or p < a0:
            deg = iroot_floor(p / c1, d)
            regime, lo, hi = FULL, 1, (delta1 - 1 if codim else eta)
        elif a1 is None or p < a1:
            deg = iroot_floor(p / (c1 * delta1), d - 1)
            regime, lo, hi = HYPERSURFACE, delta1, (delta2 - 1 if codim == 2 else eta)
        else:
            deg = iroot_floor(p / (c1 * delta1 * delta2), d - 2)
            regime, lo, hi = CODIM2, delta2, eta
        clamped = not lo <= deg <= hi
        if clamped:
            deg = max(lo, min(deg, math.floor(hi)))
        entries.append(ScheduleEntry(i, 2 ** i, int(deg), regime, clamped))
    return VarietySchedule(eta, s0, s1, t, tuple(entries), a0, a1)


def classify(P, polys: Sequence[Polynomial]):
    """Sign-condition cells of ``P``: pattern -> point indices, plus the residue."""
    P = as_point_set(P)
    columns = [signs(g, P.points) for g in polys]
    cells: dict = {}
    residue = []
    for i in range(len(P)):
        pattern = tuple(col[i] for col in columns)
        if 0 in pattern:
            residue.append(i)
        else:
            cells.setdefault(pattern, []).append(i)
    return {k: tuple(v) for k, v in cells.items()}, tuple(residue)


@dataclass
class PartitionResult:
    points: PointSet
    polynomials: list
    budget: int
    schedule: list
    cells: dict
    residue: tuple
    kernel_stage: int | None = None
    stage_degrees: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def stages(self) -> int:
        return len(self.polynomials)

    @property
    def degrees(self) -> list[int]:
        return [int(g.degree) for g in self.polynomials]

    @property
    def product_degree(self) -> int:
        return sum(self.degrees)

    @property
    def max_cell(self) -> int:
        return max((len(v) for v in self.cells.values()), default=0)

    @property
    def balance_bound(self) -> int:
        return -(-len(self.points) // 2 ** self.stages)

    @property
    def budget_ok(self) -> bool:
        return self.product_degree <= self.budget

    @property
    def balanced(self) -> bool:
        return self.max_cell <= self.balance_bound

    def conserved(self) -> bool:
        return len(self.residue) + sum(len(v) for v in self.cells.values()) == len(self.points)

    def cell_sets(self) -> dict:
        return {k: self.points.subset(v) for k, v in self.cells.items()}

    def product(self) -> Polynomial:
        from .poly import product
        return product(self.polynomials, self.points.dimension)


def _stage_seed(seed: int, i: int, attempt: int = 0) -> int:
    return (seed * 1_000_003 + i * 7919 + attempt * 104_729) % (2 ** 63)


class _Driver:
    def __init__(self, P: PointSet, budget: int, seed: int, max_iterations: int, restarts: int):
        self.P = P
        self.budget = budget
        self.seed = seed
        self.max_iterations = max_iterations
        self.restarts = restarts
        self.family = [list(range(len(P)))]
        self.residue: set = set()
        self.polys: list = []
        self.notes: list = []

    def apply(self, g: Polynomial):
        s = signs(g, self.P.points)
        new = []
        for Q in self.family:
            plus = [i for i in Q if s[i] > 0]
            minus = [i for i in Q if s[i] < 0]
            self.residue.update(i for i in Q if s[i] == 0)
            new.extend(x for x in (plus, minus) if x)
        self.family = new
        self.polys.append(g)

    def bisect(self, split, degree, stage, accept=None):
        sets = [self.P.subset(Q) for Q in split]
        last = None
        for attempt in range(3):
            try:
                g, cut = lift_and_bisect_cut(
                    sets, degree, seed=_stage_seed(self.seed, stage, attempt),
                    max_iterations=self.max_iterations, restarts=self.restarts)
            except SearchExhausted as exc:
                last = exc
                continue
            if accept is None or accept(g):
                return g
            self.notes.append(f"stage {stage}: cut rejected on attempt {attempt}")
        raise SearchExhausted(f"stage {stage}: no usable cut", getattr(last, "best_imbalance", None))

    def result(self, schedule, kernel_stage=None) -> PartitionResult:
        cells, residue = classify(self.P, self.polys)
        # exact re-classification must agree with the tracked family
        tracked = sorted(tuple(Q) for Q in self.family)
        if sorted(cells.values()) != tracked or set(residue) != self.residue:
            raise AssertionError("cell tracking disagrees with exact classification")
        return PartitionResult(self.P, list(self.polys), self.budget, list(schedule),
                               cells, residue, kernel_stage, notes=list(self.notes))


def partition(P, ell: int, seed: int = 0, max_iterations: int = 4000,
              restarts: int = 12) -> PartitionResult:
    """Partition ``P`` in R^d with stage polynomials of total degree <= ``ell``.

    Cells whose size already meets the final target ``ceil(m / 2^T)``
    are not bisected again. If the lifted data cannot hold the sets of a
    stage, a polynomial vanishing on them is used instead and they move
    to the residue.
    """
    P = as_point_set(P)
    if len(P) == 0:
        raise PreconditionError("empty point set")
    schedule = schedule_full_space(P.dimension, ell)
    drv = _Driver(P, ell, seed, max_iterations, restarts)
    target = -(-len(P) // 2 ** len(schedule)) if schedule else len(P)
    try:
        for entry in schedule:
            split = [Q for Q in drv.family if len(Q) > target]
            if not split:
                break
            try:
                g = drv.bisect(split, entry.degree, entry.stage)
            except CapacityTooSmall:
                union = drv.P.subset([i for Q in split for i in Q])
                g = kernel_polynomial(union, entry.degree)
                drv.notes.append(f"stage {entry.stage}: capacity too small, vanishing polynomial used")
            drv.apply(g)
    except SearchExhausted as exc:
        exc.partial = drv.result(schedule)
        raise
    return drv.result(schedule)


def partition_on_variety(P, X: VarietySpec, ell: int, seed: int = 0, c1=None,
                         max_iterations: int = 4000, restarts: int = 12,
                         check_samples: int = 24) -> PartitionResult:
    """Partition points of a variety X of codimension <= 2.

    Before stage i the Hilbert function of P at l_i is compared with
    that of X (estimated from samples). A deficit means some polynomial
    of degree <= l_i vanishes on P but not on X; it is returned alone and
    every point lands in the residue. Otherwise the stage bisects as in
    :func:`partition`, rejecting cuts that vanish on all samples of X.
    """
    P = as_point_set(P)
    X.validate()
    if P.dimension != X.dimension:
        raise PreconditionError("points and variety live in different dimensions")
    if len(P) == 0:
        raise PreconditionError("empty point set")
    for p in P:
        if not X.contains(p):
            raise PreconditionError(f"point {tuple(map(str, p))} is not on the variety")
    codim = X.dimension - X.dim
    sched = schedule_variety(X.dimension, X.delta1, X.delta2, ell, c1, codim=codim)
    entries = list(sched.entries)
    if not entries:
        entries = [ScheduleEntry(0, 1, X.delta2, FALLBACK)]
    samples = X.sample(check_samples, seed=seed + 1)
    drv = _Driver(P, ell, seed, max_iterations, restarts)
    target = -(-len(P) // 2 ** len(entries))

    def cuts_properly(g):
        return any(signs(g, samples))

    try:
        for entry in entries:
            deg = entry.degree
            hf_x = estimate_variety_hilbert(X, deg, seed=seed).value
            hf_p = _rank_up_to(P.points, deg, hf_x)
            if hf_p < hf_x:
                g = kernel_polynomial(P, deg, avoid=samples)
                if g is not None:
                    drv.polys, drv.family = [g], []
                    drv.residue = set(range(len(P)))
                    drv.notes.append(
                        f"stage {entry.stage}: HF(P, {deg}) = {hf_p} < HF(X, {deg}) = {hf_x}")
                    return drv.result(entries, kernel_stage=entry.stage)
            split = [Q for Q in drv.family if len(Q) > target]
            if not split:
                break
            g = drv.bisect(split, deg, entry.stage, accept=cuts_properly)
            drv.apply(g)
    except SearchExhausted as exc:
        exc.partial = drv.result(entries)
        raise
    return drv.result(entries)


def _rank_up_to(points, degree: int, cap: int) -> int:
    """Hilbert function of ``points`` at ``degree``, stopping early at ``cap``."""
    d = len(points[0])
    basis = _TrackedBasis(binomial(degree + d, d))
    chunk = max(cap, 8)
    for start in range(0, len(points), chunk):
        basis.feed(homogeneous_rows(points[start:start + chunk], degree))
        if basis.rank >= cap or basis.full:
            break
    return basis.rank
