"""Scikit-learn style wrappers around the Veronese lift and the partitioners.

Inputs may be float arrays (converted exactly, not rounded), nested
lists of ints/Fractions/decimal strings, or a :class:`PointSet`.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .errors import DimensionMismatch, PreconditionError
from .partition import partition, partition_on_variety
from .poly import PointSet, as_point_set, signs
from .variety import VarietySpec
from .veronese import veronese_exponents, veronese_lift

#: label for points lying on some partitioning polynomial
RESIDUE = -1
#: label for a sign pattern that no fitted cell realizes
UNSEEN = -2


def check_points(X, dimension: int | None = None) -> PointSet:
    """Validate ``X`` as a nonempty 2-d collection of finite exact coordinates."""
    if isinstance(X, np.ndarray):
        if X.ndim != 2:
            raise ValueError(f"expected a 2-d array, got shape {X.shape}")
        if X.dtype.kind == "f" and not np.all(np.isfinite(X)):
            raise ValueError("input contains NaN or infinity")
    P = as_point_set(X)
    if len(P) == 0:
        raise ValueError("empty input")
    if dimension is not None and P.dimension != dimension:
        raise DimensionMismatch(
            f"X has {P.dimension} features, but the estimator was fitted with {dimension}")
    return P


def check_degree(degree) -> int:
    if isinstance(degree, bool) or not isinstance(degree, (int, np.integer)) or degree < 1:
        raise ValueError(f"degree must be a positive integer, got {degree!r}")
    return int(degree)


class VeroneseTransformer(TransformerMixin, BaseEstimator):
    """Map points to all their nonconstant monomials of degree <= ``degree``.

    With ``exact=True`` the output is an object array of Fractions;
    otherwise float64.
    """

    def __init__(self, degree=2, exact=False):
        self.degree = degree
        self.exact = exact

    def fit(self, X, y=None):
        deg = check_degree(self.degree)
        P = check_points(X)
        self.n_features_in_ = P.dimension
        self.exponents_ = veronese_exponents(P.dimension, deg)
        return self

    def transform(self, X):
        check_is_fitted(self, "exponents_")
        P = check_points(X, self.n_features_in_)
        rows = [veronese_lift(p, self.degree) for p in P]
        if self.exact:
            out = np.empty((len(rows), len(self.exponents_)), dtype=object)
            for i, r in enumerate(rows):
                out[i, :] = r
            return out
        return np.array([[float(v) for v in r] for r in rows], dtype=float)

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "exponents_")
        names = input_features or [f"x{i}" for i in range(self.n_features_in_)]
        out = []
        for exps in self.exponents_:
            parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e]
            out.append(" ".join(parts))
        return np.array(out, dtype=object)


class _PartitionerBase(ClusterMixin, BaseEstimator):
    def _store(self, P: PointSet, result):
        self.result_ = result
        self.polynomials_ = list(result.polynomials)
        self.n_features_in_ = P.dimension
        keys = sorted(result.cells)
        self.cell_patterns_ = keys
        self._index = {k: i for i, k in enumerate(keys)}
        labels = np.full(len(P), RESIDUE, dtype=int)
        for k, idx in result.cells.items():
            labels[list(idx)] = self._index[k]
        self.labels_ = labels
        return self

    def transform(self, X):
        """Sign matrix: one column per partitioning polynomial, entries in {-1, 0, 1}."""
        check_is_fitted(self, "result_")
        P = check_points(X, self.n_features_in_)
        if not self.polynomials_:
            return np.zeros((len(P), 0), dtype=int)
        return np.array([signs(g, P.points) for g in self.polynomials_], dtype=int).T

    def predict(self, X):
        """Cell index of each point; -1 on the zero set, -2 for an unrealized pattern."""
        S = self.transform(X)
        out = np.empty(len(S), dtype=int)
        for i, row in enumerate(S):
            key = tuple(int(v) for v in row)
            out[i] = RESIDUE if 0 in key else self._index.get(key, UNSEEN)
        return out


class PolynomialPartitioner(_PartitionerBase):
    """Split points in R^d into balanced sign cells of a few polynomials.

    The total degree of the polynomials is at most ``degree``.
    """

    def __init__(self, degree=4, seed=0, max_iterations=4000, restarts=12):
        self.degree = degree
        self.seed = seed
        self.max_iterations = max_iterations
        self.restarts = restarts

    def fit(self, X, y=None):
        deg = check_degree(self.degree)
        P = check_points(X)
        res = partition(P, deg, seed=self.seed, max_iterations=self.max_iterations,
                        restarts=self.restarts)
        return self._store(P, res)


class VarietyPartitioner(_PartitionerBase):
    """Partition points lying on a variety of codimension at most two."""

    def __init__(self, variety=None, degree=96, seed=0, c1=None, max_iterations=4000, restarts=12):
        self.variety = variety
        self.degree = degree
        self.seed = seed
        self.c1 = c1
        self.max_iterations = max_iterations
        self.restarts = restarts

    def fit(self, X, y=None):
        if not isinstance(self.variety, VarietySpec):
            raise PreconditionError("variety must be a VarietySpec")
        deg = check_degree(self.degree)
        P = check_points(X, self.variety.dimension)
        c1 = None if self.c1 is None else Fraction(self.c1)
        res = partition_on_variety(P, self.variety, deg, seed=self.seed, c1=c1,
                                   max_iterations=self.max_iterations, restarts=self.restarts)
        self.kernel_fallback_ = res.kernel_stage is not None
        return self._store(P, res)
