"""Simultaneous bisection of finite point sets by one hyperplane.

A cut ``c = (c0, c1, ..., cN)`` bisects a set Q when at most
``floor(|Q|/2)`` points of Q lie strictly on each side of
``c0 + c . x = 0``. Points on the hyperplane count for neither side.

The search runs in floating point (smoothed Gauss-Newton on a random
low-dimensional projection, followed by an LP rounding step) but every
returned cut is re-counted in exact integer arithmetic.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .errors import CapacityTooSmall, NoCutFound, OracleScopeExceeded, PreconditionError, SearchExhausted
from .linalg import EchelonBasis, dot, integer_row, iter_nullspace, primitive
from .poly import Polynomial, as_point_set
from .veronese import VeroneseBasis, binomial, homogeneous_rows

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SmoothingSchedule:
    initial: float = 1.0
    decay: float = 0.5
    floor: float = 1e-3


@dataclass
class BisectionProblem:
    """``sets`` holds r lists of vectors in R^N (rationals or anything Fraction accepts)."""

    dimension: int
    sets: list
    max_iterations: int = 4000
    seed: int = 0
    smoothing: SmoothingSchedule = field(default_factory=SmoothingSchedule)
    restarts: int = 12

    def __post_init__(self):
        if not self.sets:
            raise PreconditionError("need at least one set")
        for s in self.sets:
            if not len(s):
                raise PreconditionError("every set must be nonempty")
            for v in s:
                if len(v) != self.dimension:
                    raise PreconditionError(
                        f"vector of length {len(v)} in a problem of dimension {self.dimension}")

    def homogeneous_sets(self) -> list[list[list[int]]]:
        return [[integer_row((Fraction(1),) + tuple(Fraction(x) for x in v)) for v in s]
                for s in self.sets]


@dataclass(frozen=True)
class Cut:
    coefficients: tuple  # N + 1 Fractions, constant first
    counts: tuple  # per set (negative, zero, positive)

    def is_valid(self) -> bool:
        return is_bisecting(self.counts) and any(self.coefficients)

    @property
    def sizes(self):
        return tuple(sum(c) for c in self.counts)


def is_bisecting(counts) -> bool:
    return all(neg <= (neg + zero + pos) // 2 and pos <= (neg + zero + pos) // 2
               for neg, zero, pos in counts)


def excess(counts) -> int:
    """Total number of points over the per-set side budgets."""
    total = 0
    for neg, zero, pos in counts:
        half = (neg + zero + pos) // 2
        total += max(0, neg - half) + max(0, pos - half)
    return total


def exact_counts(c: Sequence[int], sets_rows) -> tuple:
    out = []
    for rows in sets_rows:
        neg = zero = pos = 0
        for r in rows:
            v = dot(c, r)
            if v > 0:
                pos += 1
            elif v < 0:
                neg += 1
            else:
                zero += 1
        out.append((neg, zero, pos))
    return tuple(out)


def _make_cut(c: Sequence[int], sets_rows) -> Cut:
    return Cut(tuple(Fraction(x) for x in c), exact_counts(c, sets_rows))


# ---------------------------------------------------------------------------
# search engine


def bisect(problem: BisectionProblem) -> Cut:
    """Find a cut bisecting every set of ``problem``.

    Raises SearchExhausted (with the best excess seen) if the randomized
    search does not find one within the iteration budget.
    """
    if len(problem.sets) > problem.dimension + 1:
        raise PreconditionError("more sets than the dimension allows")
    rows = problem.homogeneous_sets()
    c = _bisect_rows(rows, problem.dimension, seed=problem.seed,
                     max_iterations=problem.max_iterations,
                     schedule=problem.smoothing, restarts=problem.restarts)
    return _make_cut(c, rows)


def _bisect_rows(sets_rows, N, seed=0, max_iterations=4000,
                 schedule=SmoothingSchedule(), restarts=12) -> list[int]:
    r = len(sets_rows)
    seqs = np.random.SeedSequence(seed).spawn(restarts + 1)
    # columns identically zero on the data carry no information
    live = [j for j in range(1, N + 1) if any(row[j] for rows in sets_rows for row in rows)]
    if not live:
        # every point has all coordinates zero: any hyperplane through the origin
        return [0, 1] + [0] * (N - 1)
    if r == 1:
        return _median_cut(sets_rows, N, live, np.random.default_rng(seqs[0]))
    search = _Search(sets_rows, N, live, max_iterations, schedule)
    for k in range(restarts):
        if search.iterations >= max_iterations:
            break
        c = search.run(np.random.default_rng(seqs[k + 1]))
        if c is not None:
            return c
    raise SearchExhausted(
        f"no bisecting cut found for {r} sets after {search.iterations} iterations",
        best_imbalance=search.best_excess)


def _median_cut(sets_rows, N, live, rng) -> list[int]:
    """One set: threshold a random linear functional at its lower median."""
    rows = sets_rows[0]
    u = [0] * (N + 1)
    for j in live:
        u[j] = int(rng.integers(-9, 10)) or 1
    vals = sorted(Fraction(dot(u, row), row[0]) for row in rows)
    m = vals[(len(vals) - 1) // 2]
    c = [x * m.denominator for x in u]
    c[0] = -m.numerator
    return primitive(c)


class _Search:
    def __init__(self, sets_rows, N, live, max_iterations, schedule):
        self.sets_rows = sets_rows
        self.N = N
        self.live = live
        self.r = len(sets_rows)
        self.sizes = [len(s) for s in sets_rows]
        self.max_iterations = max_iterations
        self.schedule = schedule
        self.iterations = 0
        self.best_excess = None
        self.k = min(len(live), 2 * self.r + 1)
        self.owner = np.concatenate([np.full(n, j) for j, n in enumerate(self.sizes)])

    def _project(self, rng):
        k, live = self.k, self.live
        if k == len(live):
            R = None
            proj = [[[row[0]] + [row[j] for j in live] for row in rows] for rows in self.sets_rows]
        else:
            R = rng.integers(-8, 9, size=(k, len(live))).tolist()
            proj = []
            for rows in self.sets_rows:
                prow = []
                for row in rows:
                    v = [row[j] for j in live]
                    prow.append([row[0]] + [sum(a * b for a, b in zip(Ri, v) if b) for Ri in R])
                proj.append(prow)
        return R, proj

    def _pull_back(self, R, cp: Sequence[int]) -> list[int]:
        c = [0] * (self.N + 1)
        c[0] = cp[0]
        if R is None:
            for t, j in enumerate(self.live):
                c[j] = cp[t + 1]
        else:
            w = cp[1:]
            for t, j in enumerate(self.live):
                c[j] = sum(w[i] * R[i][t] for i in range(self.k))
        return primitive(c)

    def run(self, rng):
        R, proj = self._project(rng)
        flat = [row for rows in proj for row in rows]
        Y = np.array([[x / row[0] for x in row[1:]] for row in flat], dtype=float)
        mu = Y.mean(axis=0)
        U, s, Vt = np.linalg.svd(Y - mu, full_matrices=False)
        keep = s > 1e-10 * max(s[0], 1e-300) if len(s) else np.zeros(0, bool)
        if keep.sum() < self.r:
            # the affine hull is too thin to separate r sets; a hyperplane
            # containing all the data bisects every set trivially
            return self._through_all(R, proj)
        scale = s[keep] / math.sqrt(len(Y))
        T = Vt[keep].T / scale  # whitening map y -> (y - mu) @ T
        Z = (Y - mu) @ T
        kz = Z.shape[1]
        Zh = np.hstack([np.ones((len(Z), 1)), Z])

        w = rng.standard_normal(kz)
        w /= np.linalg.norm(w)
        z0 = Z @ w
        c = np.concatenate([[-np.median(z0[self.owner == 0])], w])

        tau = self.schedule.initial
        while True:
            c = self._descend(Zh, c, tau)
            found = self._round(c, Zh, T, mu, R, proj)
            if found is not None:
                return found
            if tau <= self.schedule.floor or self.iterations >= self.max_iterations:
                return None
            tau = max(tau * self.schedule.decay, self.schedule.floor)

    def _residual(self, Zh, c, tau):
        z = Zh @ c / tau
        t = np.tanh(z)
        sech2 = 1.0 - t * t
        F = np.zeros(self.r)
        J = np.zeros((self.r, len(c)))
        np.add.at(F, self.owner, t)
        np.add.at(J, self.owner, sech2[:, None] * Zh / tau)
        n = np.asarray(self.sizes, float)
        return F / n, J / n[:, None]

    def _descend(self, Zh, c, tau, steps=25):
        F, J = self._residual(Zh, c, tau)
        f = F @ F
        for _ in range(steps):
            if self.iterations >= self.max_iterations or f < 1e-14:
                break
            self.iterations += 1
            w = c[1:]
            # tangent step: keep |w| = 1
            P = np.eye(len(c))
            P[1:, 1:] -= np.outer(w, w)
            delta = -P @ np.linalg.lstsq(J @ P, F, rcond=None)[0]
            lam = 1.0
            improved = False
            while lam > 1e-4:
                trial = c + lam * delta
                nw = np.linalg.norm(trial[1:])
                if nw > 0:
                    trial = trial / nw
                    Ft, Jt = self._residual(Zh, trial, tau)
                    ft = Ft @ Ft
                    if ft < f:
                        c, F, J, f = trial, Ft, Jt, ft
                        improved = True
                        break
                lam *= 0.5
            if not improved:
                break
        return c

    def _targets(self, z):
        """Per-point desired sign (+1, -1) or 0 for odd-set medians."""
        target = np.zeros(len(z), dtype=int)
        start = 0
        for n in self.sizes:
            idx = np.argsort(z[start:start + n], kind="stable") + start
            half = n // 2
            target[idx[:half]] = -1
            target[idx[n - half:]] = 1
            start += n
        return target

    def _round(self, c, Zh, T, mu, R, proj):
        z = Zh @ c
        flat = [row for rows in proj for row in rows]
        target = self._targets(z)
        on = [flat[i] for i in np.flatnonzero(target == 0)]
        ncols = len(flat[0])
        B = list(iter_nullspace(on, ncols))
        if not B:
            return None
        # float image of the kernel basis, columns scaled to unit max
        exps = [max(abs(y) for y in b).bit_length() for b in B]
        Bf = np.array([[x / (1 << e) for x in b] for b, e in zip(B, exps)]).T  # ncols x q
        Yh = np.array([[x / row[0] for x in row] for row in flat], dtype=float)
        A = Yh @ Bf  # value of each point under each kernel vector
        candidates = []
        # least-squares match of the descent direction, mapped back to projected coordinates
        cw = T @ c[1:]
        c_proj = np.concatenate([[c[0] - mu @ cw], cw])
        alpha_ls = np.linalg.lstsq(Bf, c_proj, rcond=None)[0]
        candidates.append(alpha_ls)
        if len(B) > 1:
            alpha_lp = self._lp(A, target)
            if alpha_lp is not None:
                candidates.insert(0, alpha_lp)
        # coarse roundings first: they give smaller coefficients when they work
        for alpha in candidates:
            for bits in (8, 16, 40):
                cp = self._rationalize(alpha, B, exps, bits)
                if cp is None:
                    continue
                counts = exact_counts(cp, proj)
                ex = excess(counts)
                if self.best_excess is None or ex < self.best_excess:
                    self.best_excess = ex
                if ex == 0 and any(cp[1:]):
                    c_full = self._pull_back(R, cp)
                    if any(c_full[1:]) and is_bisecting(exact_counts(c_full, self.sets_rows)):
                        return c_full
        return None

    @staticmethod
    def _lp(A, target):
        mask = target != 0
        rows = A[mask] * target[mask][:, None]
        norms = np.linalg.norm(rows, axis=1)
        ok = norms > 1e-12
        rows = rows[ok] / norms[ok][:, None]
        q = A.shape[1]
        if not len(rows):
            return None
        res = linprog(np.zeros(q), A_ub=-rows, b_ub=-np.full(len(rows), 1e-3),
                      bounds=[(-1e3, 1e3)] * q, method="highs")
        if res.status != 0:
            return None
        return res.x

    @staticmethod
    def _rationalize(alpha, B, exps, bits=40):
        """Exact integer combination of kernel vectors approximating ``alpha``.

        Column j of the float basis is ``B[j] / 2^exps[j]``; coefficients are
        rounded to ``bits`` bits and the powers of two cleared by shifts.
        """
        if not np.all(np.isfinite(alpha)) or not np.any(alpha):
            return None
        scale = float(np.max(np.abs(alpha)))
        top = max(exps)
        vec = [0] * len(B[0])
        for a, b, e in zip(alpha, B, exps):
            q = int(round(float(a) / scale * (1 << bits)))
            if q:
                q <<= top - e
                for i, x in enumerate(b):
                    if x:
                        vec[i] += q * x
        return primitive(vec) if any(vec) else None

    def _through_all(self, R, proj):
        """A hyperplane containing every data point, found on the full rows."""
        ncols = self.N + 1
        eb = EchelonBasis(ncols)
        for rows in self.sets_rows:
            for row in rows:
                eb.add(row)
        for c in iter_nullspace(eb.rows, ncols):
            if any(c[1:]):
                return primitive(c)
        return None


# ---------------------------------------------------------------------------
# exhaustive oracle


def bisect_oracle(problem: BisectionProblem) -> Cut:
    """Exhaustive search, used as ground truth in tests.

    If a valid cut exists, sliding it without moving any point across it
    until it is pinned by N affinely independent points keeps it valid;
    every odd set has a point on any valid cut. So it suffices to try
    hyperplanes through one point of each set plus N - r further points.
    """
    r, N = len(problem.sets), problem.dimension
    sizes = [len(s) for s in problem.sets]
    if r > 3 or N > 6 or r > N or any(n % 2 == 0 or n > 9 for n in sizes):
        raise OracleScopeExceeded("oracle needs r <= min(3, N), N <= 6 and odd set sizes <= 9")
    rows = problem.homogeneous_sets()
    flat = [row for s in rows for row in s]
    full = EchelonBasis(N + 1)
    for row in flat:
        full.add(row)
    if full.rank < N + 1:
        # the data lie in a hyperplane: take it
        for c in iter_nullspace(full.rows, N + 1):
            if any(c[1:]):
                return _make_cut(c, rows)
    offsets = list(itertools.accumulate([0] + sizes))
    for pick in itertools.product(*[range(n) for n in sizes]):
        chosen = [offsets[j] + i for j, i in enumerate(pick)]
        base = EchelonBasis(N + 1)
        if not all(base.add(flat[i]) for i in chosen):
            continue
        rest = [i for i in range(len(flat)) if i not in chosen]
        for extra in itertools.combinations(rest, N - r):
            eb = EchelonBasis(N + 1)
            eb.rows, eb.pivots = list(base.rows), list(base.pivots)
            if not all(eb.add(flat[i]) for i in extra):
                continue
            c = next(iter_nullspace(eb.rows, N + 1))
            counts = exact_counts(c, rows)
            if is_bisecting(counts):
                return Cut(tuple(Fraction(x) for x in c), counts)
    raise NoCutFound("exhaustive search found no bisecting hyperplane")


# ---------------------------------------------------------------------------
# polynomial front end


def lifted_rank_at_least(sets_rows, target: int) -> int:
    """Rank of the stacked rows, stopping once ``target`` is reached."""
    ncols = len(sets_rows[0][0])
    eb = EchelonBasis(ncols)
    for rows in sets_rows:
        for row in rows:
            eb.add(row)
            if eb.rank >= target or eb.full:
                return eb.rank
    return eb.rank


def lift_and_bisect_cut(sets: Sequence, degree: int, seed: int = 0,
                        max_iterations: int = 4000, restarts: int = 12) -> tuple[Polynomial, Cut]:
    """Polynomial of degree <= ``degree`` bisecting every point set, with its cut."""
    sets = [as_point_set(s) for s in sets]
    if not sets or any(len(s) == 0 for s in sets):
        raise PreconditionError("need nonempty point sets")
    d = sets[0].dimension
    if any(s.dimension != d for s in sets):
        raise PreconditionError("point sets of different dimension")
    rows = [homogeneous_rows(s.points, degree) for s in sets]
    r = len(sets)
    rank = lifted_rank_at_least(rows, r + 1)
    if rank - 1 < r:
        raise CapacityTooSmall(rank - 1, r)
    N = binomial(degree + d, d) - 1
    c = _bisect_rows(rows, N, seed=seed, max_iterations=max_iterations, restarts=restarts)
    poly = VeroneseBasis(d, degree).polynomial(c).primitive()
    return poly, _make_cut(c, rows)


def lift_and_bisect(sets: Sequence, degree: int, seed: int = 0, **kwargs) -> Polynomial:
    return lift_and_bisect_cut(sets, degree, seed=seed, **kwargs)[0]
