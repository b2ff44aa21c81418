import random
from fractions import Fraction

import pytest


def naive_rank(rows):
    """Plain Fraction Gaussian elimination, kept independent of the library."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col] != 0:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def monomial_rows(points, degree):
    """Rows (1, all monomials of degree 1..degree) built by brute force."""
    import itertools
    d = len(points[0])
    exps = [e for e in itertools.product(range(degree + 1), repeat=d) if 0 < sum(e) <= degree]
    rows = []
    for p in points:
        row = [Fraction(1)]
        for e in exps:
            v = Fraction(1)
            for x, k in zip(p, e):
                v *= Fraction(x) ** k
            row.append(v)
        rows.append(row)
    return rows


@pytest.fixture
def rng():
    return random.Random(12345)
