"""Veronese lifting and Hilbert functions of finite point sets.

The Hilbert function of the vanishing ideal of ``E`` at degree ``l``
equals one plus the dimension of the affine hull of the degree-``l``
Veronese image of ``E``. We compute it as the rank of the matrix with
rows ``(1, v_l(p))``; scaling each row by a positive integer turns it
into the homogeneous coordinates of ``(1 : p)`` and keeps everything in
integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Sequence

from .errors import PreconditionError
from .linalg import EchelonBasis, dot, iter_nullspace
from .poly import Polynomial, as_point_set


def binomial(n: int, i: int) -> int:
    """Binomial coefficient, zero outside 0 <= i <= n (also for negative n)."""
    if 0 <= i <= n:
        return math.comb(n, i)
    return 0


@lru_cache(maxsize=None)
def veronese_exponents(d: int, degree: int) -> tuple:
    """Nonzero exponent vectors of total degree <= ``degree``, graded-lex ascending degree."""
    out = []
    for total in range(1, degree + 1):
        out.extend(_compositions(total, d))
    return tuple(out)


def _compositions(total: int, parts: int):
    # lex-descending: x1^total first
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class VeroneseBasis:
    dimension: int
    degree: int

    @property
    def exponents(self) -> tuple:
        return veronese_exponents(self.dimension, self.degree)

    def __len__(self):
        return binomial(self.degree + self.dimension, self.dimension) - 1

    def polynomial(self, coefficients: Sequence) -> Polynomial:
        """Polynomial ``c0 + sum c_a x^a`` from a coefficient vector, constant first."""
        if len(coefficients) != len(self) + 1:
            raise ValueError(f"expected {len(self) + 1} coefficients, got {len(coefficients)}")
        terms = {(0,) * self.dimension: coefficients[0]}
        terms.update(zip(self.exponents, coefficients[1:]))
        return Polynomial(self.dimension, terms)


def veronese_lift(p: Sequence, degree: int) -> tuple:
    if degree < 1:
        raise PreconditionError("Veronese degree must be >= 1")
    p = tuple(Fraction(x) for x in p)
    out = []
    for exps in veronese_exponents(len(p), degree):
        v = Fraction(1)
        for x, e in zip(p, exps):
            if e:
                v *= x ** e
        out.append(v)
    return tuple(out)


def homogeneous_rows(points: Iterable[Sequence], degree: int) -> list[list[int]]:
    """Integer rows ``D^l * (1, v_l(p))`` with ``D`` the common denominator of ``p``.

    Every row is a positive multiple of ``(1, v_l(p))``, so signs of
    linear functionals and ranks are unchanged.
    """
    rows = []
    for p in points:
        d = len(p)
        exps = veronese_exponents(d, degree)
        den = reduce(math.lcm, (Fraction(x).denominator for x in p), 1)
        nums = [int(Fraction(x) * den) for x in p]
        num_pows = [[1] * (degree + 1) for _ in range(d)]
        for k in range(d):
            for e in range(1, degree + 1):
                num_pows[k][e] = num_pows[k][e - 1] * nums[k]
        den_pows = [1] * (degree + 1)
        for e in range(1, degree + 1):
            den_pows[e] = den_pows[e - 1] * den
        row = [den_pows[degree]]
        for a in exps:
            v = den_pows[degree - sum(a)]
            for k, e in enumerate(a):
                if e:
                    v *= num_pows[k][e]
            row.append(v)
        rows.append(row)
    return rows


@dataclass(frozen=True)
class HilbertEstimate:
    degree: int
    value: int
    rank_source: int
    saturated: bool


def hilbert_from_points(E, degree: int, batch: int = 5) -> HilbertEstimate:
    """Hilbert function at ``degree`` of the ideal of the finite set ``E``.

    ``rank_source`` counts the points consumed before the rank reached its
    final value's certificate (all points, unless the rank hit the number
    of monomials first). ``saturated`` means the rank stopped growing at
    least two batches before the data ran out.
    """
    E = as_point_set(E)
    if len(E) == 0:
        raise PreconditionError("empty point set")
    if degree < 0:
        raise PreconditionError("degree must be nonnegative")
    if degree == 0:
        return HilbertEstimate(0, 1, 1, True)
    basis = echelon_of_points(E.points, degree)
    return HilbertEstimate(degree, basis.rank, basis.rows_used, basis.saturated(batch))


class _TrackedBasis(EchelonBasis):
    def __init__(self, ncols):
        super().__init__(ncols)
        self.rows_used = 0
        self.last_growth = -1

    def feed(self, rows):
        for r in rows:
            if self.full:
                break
            if self.add(r):
                self.last_growth = self.rows_used
            self.rows_used += 1

    def saturated(self, batch: int) -> bool:
        if self.full:
            return True
        return self.rows_used - 1 - self.last_growth >= 2 * batch


def echelon_of_points(points: Sequence[Sequence], degree: int) -> _TrackedBasis:
    d = len(points[0])
    basis = _TrackedBasis(binomial(degree + d, d))
    basis.feed(homogeneous_rows(points, degree))
    return basis


def affine_capacity(E, degree: int) -> int:
    """Dimension of the affine hull of the Veronese image: HF - 1."""
    return hilbert_from_points(E, degree).value - 1


def kernel_polynomial(E, degree: int, avoid: Sequence[Sequence] = ()) -> Polynomial | None:
    """A nonzero polynomial of degree <= ``degree`` vanishing on ``E``.

    When ``avoid`` is given, the polynomial must be nonzero at one of
    those points. Returns None when no such polynomial exists.
    """
    E = as_point_set(E)
    d = E.dimension
    basis = echelon_of_points(E.points, degree)
    ncols = basis.ncols
    if basis.rank == ncols:
        return None
    avoid_rows = homogeneous_rows(avoid, degree) if len(avoid) else []
    vb = VeroneseBasis(d, degree)
    for vec in iter_nullspace(basis.rows, ncols):
        if not avoid_rows or any(dot(vec, r) for r in avoid_rows):
            return vb.polynomial(vec)
    return None
