"""Exact sparse multivariate polynomials and rational point sets."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatch, ParseError

Rational = Fraction
Point = tuple  # tuple of Fraction
Monomial = tuple  # tuple of nonnegative ints

#: Degree of the zero polynomial. Any sum with it stays -inf.
ZERO_DEGREE = float("-inf")


def to_rational(value) -> Fraction:
    """Convert ints, Fractions, floats (exactly) or decimal strings."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational number: {value!r}") from exc
    try:
        return Fraction(value)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"not a rational number: {value!r}") from exc


def grlex_key(exponents: Monomial):
    """Sort key for graded-lex order, largest monomial first."""
    return (-sum(exponents), tuple(-e for e in exponents))


def monomial_degree(exponents: Monomial) -> int:
    return sum(exponents)


class Polynomial:
    """Immutable polynomial in ``dimension`` variables with rational coefficients.

    ``terms`` maps exponent tuples to nonzero Fractions.
    """

    __slots__ = ("dimension", "_terms", "_hash")

    def __init__(self, dimension: int, terms: Mapping | Iterable = ()):
        if dimension < 0:
            raise ValueError("dimension must be nonnegative")
        self.dimension = int(dimension)
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for exps, coeff in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.dimension:
                raise DimensionMismatch(
                    f"monomial {exps} has length {len(exps)}, expected {self.dimension}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = clean.get(exps, Fraction(0)) + to_rational(coeff)
            if c:
                clean[exps] = c
            else:
                clean.pop(exps, None)
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, dimension: int) -> "Polynomial":
        return cls(dimension)

    @classmethod
    def constant(cls, dimension: int, value=1) -> "Polynomial":
        return cls(dimension, {(0,) * dimension: value})

    @classmethod
    def variable(cls, dimension: int, index: int) -> "Polynomial":
        exps = [0] * dimension
        exps[index] = 1
        return cls(dimension, {tuple(exps): 1})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self):
        if not self._terms:
            return ZERO_DEGREE
        return max(sum(e) for e in self._terms)

    def coefficient(self, exponents: Monomial) -> Fraction:
        return self._terms.get(tuple(exponents), Fraction(0))

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]))

    # arithmetic
    def _check(self, other: "Polynomial"):
        if other.dimension != self.dimension:
            raise DimensionMismatch(
                f"dimension {self.dimension} vs {other.dimension}")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.dimension, to_rational(other))

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0) + c
        return Polynomial(self.dimension, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.dimension, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        terms = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial(self.dimension, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.dimension)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.dimension == other.dimension and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dimension, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        if not self._terms:
            return f"Polynomial({self.dimension}, 0)"
        parts = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
                for i, e in enumerate(exps) if e)
            parts.append(f"{c}" if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return f"Polynomial({self.dimension}, {' + '.join(parts)})"

    def __call__(self, point):
        return evaluate(self, point)

    def primitive(self) -> "Polynomial":
        """Positive rescaling to coprime integer coefficients (same zero set and signs)."""
        if not self._terms:
            return self
        coeffs = list(self._terms.values())
        den = reduce(math.lcm, (c.denominator for c in coeffs), 1)
        nums = [c.numerator * (den // c.denominator) for c in coeffs]
        g = reduce(math.gcd, (abs(n) for n in nums))
        return Polynomial(self.dimension, {
            e: Fraction(n, g) for e, n in zip(self._terms, nums)})

    # text format
    def to_text(self, header: bool = True) -> str:
        lines = [f"# dimension {self.dimension}"] if header else []
        for exps, c in self.sorted_terms():
            lines.append(" ".join([str(c)] + [str(e) for e in exps]))
        return "\n".join(lines) + "\n"

    def to_inline(self) -> str:
        """Single-line form: terms of the text format separated by ';'."""
        if not self._terms:
            return "0"
        return "; ".join(
            " ".join([str(c)] + [str(e) for e in exps])
            for exps, c in self.sorted_terms())


def evaluate(f: Polynomial, p: Sequence) -> Fraction:
    if len(p) != f.dimension:
        raise DimensionMismatch(f"point has length {len(p)}, polynomial dimension {f.dimension}")
    total = Fraction(0)
    for exps, c in f.items():
        term = c
        for x, e in zip(p, exps):
            if e:
                term *= x ** e
        total += term
    return total


def sign_at(f: Polynomial, p: Sequence) -> int:
    v = evaluate(f, p)
    return (v > 0) - (v < 0)


def product(fs: Sequence[Polynomial], dimension: int | None = None) -> Polynomial:
    """Product of a list; the empty product is the constant 1."""
    fs = list(fs)
    if not fs:
        if dimension is None:
            raise ValueError("dimension is required for an empty product")
        return Polynomial.constant(dimension)
    dims = {f.dimension for f in fs}
    if len(dims) != 1 or (dimension is not None and dims != {dimension}):
        raise DimensionMismatch(f"mixed dimensions {sorted(dims)}")
    return reduce(lambda a, b: a * b, fs)


def parse_polynomial(text: str, dimension: int | None = None) -> Polynomial:
    """Parse the one-term-per-line format ``<coeff> <e1> ... <ed>``.

    A ``# dimension d`` comment fixes the dimension of an empty file.
    Terms may also be separated by ';' on a single line.
    """
    terms = []
    for raw in text.replace(";", "\n").splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            words = line[1:].split()
            if len(words) == 2 and words[0] == "dimension" and dimension is None:
                dimension = int(words[1])
            continue
        if line == "0":
            continue
        fields = line.split()
        coeff = to_rational(fields[0])
        try:
            exps = tuple(int(w) for w in fields[1:])
        except ValueError as exc:
            raise ParseError(f"bad exponent in line {raw!r}") from exc
        if any(e < 0 for e in exps):
            raise ParseError(f"negative exponent in line {raw!r}")
        if dimension is None:
            dimension = len(exps)
        if len(exps) != dimension:
            raise ParseError(f"line {raw!r} has {len(exps)} exponents, expected {dimension}")
        terms.append((exps, coeff))
    if dimension is None:
        raise ParseError("cannot infer dimension of an empty polynomial")
    return Polynomial(dimension, terms)


def read_polynomial(path, dimension: int | None = None) -> Polynomial:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read polynomial file {path}: {exc}") from exc
    return parse_polynomial(text, dimension)


def write_polynomial(f: Polynomial, path) -> None:
    Path(path).write_text(f.to_text())


class PointSet:
    """Ordered list of exact points sharing one dimension. Duplicates are allowed."""

    __slots__ = ("dimension", "points", "labels")

    def __init__(self, points: Iterable, dimension: int | None = None, labels=None):
        pts = tuple(tuple(to_rational(x) for x in p) for p in points)
        if dimension is None:
            if not pts:
                raise ValueError("dimension is required for an empty point set")
            dimension = len(pts[0])
        for p in pts:
            if len(p) != dimension:
                raise DimensionMismatch(f"point of length {len(p)} in a {dimension}-dimensional set")
        self.dimension = int(dimension)
        self.points = pts
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != len(pts):
                raise ValueError("one label per point required")
        self.labels = labels

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def __eq__(self, other):
        return (isinstance(other, PointSet) and self.dimension == other.dimension
                and self.points == other.points)

    def __repr__(self):
        return f"PointSet(dimension={self.dimension}, size={len(self.points)})"

    def subset(self, indices) -> "PointSet":
        labels = None if self.labels is None else [self.labels[i] for i in indices]
        return PointSet([self.points[i] for i in indices], self.dimension, labels)

    def duplicate_count(self) -> int:
        """Number of points equal to an earlier point."""
        return len(self.points) - len(set(self.points))

    def union(self, other: "PointSet") -> "PointSet":
        if other.dimension != self.dimension:
            raise DimensionMismatch("cannot join point sets of different dimension")
        return PointSet(self.points + other.points, self.dimension)

    def to_text(self) -> str:
        return "".join(" ".join(str(x) for x in p) + "\n" for p in self.points)


def parse_points(text: str, dimension: int | None = None) -> PointSet:
    """One point per line; rationals or decimals, converted exactly."""
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([to_rational(w) for w in line.replace(",", " ").split()])
    if dimension is None and rows:
        dimension = len(rows[0])
    if dimension is None:
        raise ParseError("empty point file")
    for r in rows:
        if len(r) != dimension:
            raise ParseError(f"point with {len(r)} coordinates, expected {dimension}")
    return PointSet(rows, dimension)


def read_points(path, dimension: int | None = None) -> PointSet:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read point file {path}: {exc}") from exc
    return parse_points(text, dimension)


def write_points(points: PointSet, path) -> None:
    Path(path).write_text(points.to_text())


def as_point_set(X, dimension: int | None = None) -> PointSet:
    """Accept a PointSet, nested sequences, or a 2-d numpy array."""
    if isinstance(X, PointSet):
        if dimension is not None and X.dimension != dimension:
            raise DimensionMismatch(f"expected dimension {dimension}, got {X.dimension}")
        return X
    if hasattr(X, "tolist"):
        X = X.tolist()
    return PointSet(X, dimension)


def signs(f: Polynomial, points: Iterable[Sequence]) -> list[int]:
    """Exact signs of ``f`` at many points, computed in integers.

    With ``p = n / D`` and ``f`` scaled to integer coefficients,
    ``D^deg f(p)`` is an integer of the same sign.
    """
    if f.is_zero():
        return [0 for _ in points]
    g = f.primitive()
    deg = g.degree
    terms = [(exps, int(c)) for exps, c in g.items()]
    out = []
    for p in points:
        if len(p) != f.dimension:
            raise DimensionMismatch(f"point has length {len(p)}, polynomial dimension {f.dimension}")
        den = reduce(math.lcm, (Fraction(x).denominator for x in p), 1)
        nums = [int(Fraction(x) * den) for x in p]
        total = 0
        for exps, c in terms:
            v = c * den ** (deg - sum(exps))
            for x, e in zip(nums, exps):
                if e:
                    v *= x ** e
            total += v
        out.append((total > 0) - (total < 0))
    return out
