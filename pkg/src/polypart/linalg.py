"""Fraction-free exact linear algebra over the rationals.

Rows are scaled to primitive integer vectors and reduced with
integer cross-multiplication, dividing out the content after every
step so entries stay small. The pass is sequential, so results do not
depend on the order in which callers build rows in parallel.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence


def integer_row(values: Sequence) -> list[int]:
    """Positive rescaling of a rational vector to a primitive integer vector."""
    if all(type(v) is int for v in values):
        return primitive(list(values))
    fracs = [v if isinstance(v, (int, Fraction)) else Fraction(v) for v in values]
    den = reduce(math.lcm, (Fraction(v).denominator for v in fracs), 1)
    row = [int(Fraction(v) * den) for v in fracs]
    return primitive(row)


def primitive(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        if x:
            g = math.gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


class EchelonBasis:
    """Incrementally grown row echelon basis of integer vectors.

    Each stored row is zero in the pivot columns of all rows inserted
    before it, so reducing a vector against the rows in insertion order
    leaves it zero exactly when it lies in their span.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def full(self) -> bool:
        return len(self.rows) == self.ncols

    def reduce(self, row: Sequence[int]) -> list[int]:
        v = list(row)
        if len(v) != self.ncols:
            raise ValueError(f"row of length {len(v)}, expected {self.ncols}")
        for b, p in zip(self.rows, self.pivots):
            a = v[p]
            if not a:
                continue
            bp = b[p]
            v = primitive([bp * x - a * y for x, y in zip(v, b)])
        return v

    def add(self, row: Sequence[int]) -> bool:
        """Insert ``row``; return True when it raised the rank."""
        if self.full:
            return False
        v = self.reduce(row)
        for j, x in enumerate(v):
            if x:
                self.rows.append(v)
                self.pivots.append(j)
                return True
        return False

    def contains(self, row: Sequence[int]) -> bool:
        return not any(self.reduce(row))


def rank(rows: Iterable[Sequence], ncols: int | None = None) -> int:
    rows = [integer_row(r) for r in rows]
    if not rows:
        return 0
    basis = EchelonBasis(ncols if ncols is not None else len(rows[0]))
    for r in rows:
        basis.add(r)
        if basis.full:
            break
    return basis.rank


def nullspace_from_rows(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Integer basis of {x : r . x = 0 for every row r}.

    ``rows`` should be linearly independent (an EchelonBasis is ideal);
    dependent rows are tolerated.
    """
    return list(iter_nullspace(rows, ncols))


def iter_nullspace(rows: Sequence[Sequence[int]], ncols: int):
    """Lazily yield an integer nullspace basis, one free column at a time.

    Reduced row echelon form is computed fraction-free: rows stay
    primitive integer vectors throughout (content is divided out after
    each update, which on structured Veronese rows beats Bareiss).
    """
    m = [primitive(list(r)) for r in rows]
    pivcols = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        a = pr[c]
        for i in range(len(m)):
            b = m[i][c]
            if i != r and b:
                m[i] = primitive([a * x - b * y for x, y in zip(m[i], pr)])
        pivcols.append(c)
        r += 1
    m = m[:r]
    pivset = set(pivcols)
    for free in range(ncols):
        if free in pivset:
            continue
        involved = [(i, pc) for i, pc in enumerate(pivcols) if m[i][free]]
        L = 1
        for i, pc in involved:
            L = math.lcm(L, abs(m[i][pc]))
        vec = [0] * ncols
        vec[free] = L
        for i, pc in involved:
            vec[pc] = -m[i][free] * (L // m[i][pc])
        yield primitive(vec)


def nullspace(rows: Iterable[Sequence], ncols: int) -> list[list[int]]:
    basis = EchelonBasis(ncols)
    for r in rows:
        basis.add(integer_row(r))
        if basis.full:
            break
    return nullspace_from_rows(basis.rows, ncols)


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))
