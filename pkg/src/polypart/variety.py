"""Varieties given by declared invariants plus a way to sample real points."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .bounds import degree_inequalities
from .errors import ParseError, PreconditionError
from .poly import PointSet, Polynomial, evaluate, read_points, read_polynomial
from .veronese import HilbertEstimate, _TrackedBasis, binomial, homogeneous_rows


@dataclass
class VarietySpec:
    """Irreducible variety X in C^d described by metadata.

    ``dim`` is dim(X), ``delta1`` the least degree of a hypersurface
    containing X and ``delta2`` the least degree at which X is locally
    set-theoretically defined. These are trusted, not computed; only the
    classical inequalities between them are checked.

    Real points come from ``parametrization`` (d polynomials in some
    parameters, evaluated at seeded random rationals) or from the stored
    ``samples``.
    """

    dimension: int
    dim: int
    degree: int
    delta1: int
    delta2: int
    equations: tuple = ()
    parametrization: tuple | None = None
    samples: PointSet | None = None
    name: str = ""
    denominator: int = field(default=1000, repr=False)

    def check(self):
        return degree_inequalities(self)

    def validate(self) -> "VarietySpec":
        failed = [c for c in self.check() if not c.passed]
        if failed:
            msg = "; ".join(f"{c.name}: {c.statement}" for c in failed)
            raise PreconditionError(f"inconsistent variety invariants: {msg}")
        for f in self.equations:
            if f.dimension != self.dimension:
                raise PreconditionError("equation dimension differs from ambient dimension")
        if self.parametrization is not None and len(self.parametrization) != self.dimension:
            raise PreconditionError("parametrization needs one polynomial per coordinate")
        if self.parametrization is None and self.samples is None:
            raise PreconditionError("variety needs a parametrization or stored samples")
        return self

    def contains(self, p) -> bool:
        return all(evaluate(f, p) == 0 for f in self.equations)

    def sample(self, n: int, seed: int = 0) -> list[tuple]:
        """``n`` real points of X; stored samples are returned in order."""
        if self.parametrization is not None:
            rng = random.Random(seed)
            k = self.parametrization[0].dimension
            den = self.denominator
            out = []
            for _ in range(n):
                t = tuple(Fraction(rng.randint(-4 * den, 4 * den), den) for _ in range(k))
                out.append(tuple(evaluate(f, t) for f in self.parametrization))
            return out
        if self.samples is not None:
            return list(self.samples.points[:n])
        raise PreconditionError("variety has no sampler")


def estimate_variety_hilbert(X: VarietySpec, degree: int, seed: int = 0,
                             batch: int = 8, max_samples: int | None = None) -> HilbertEstimate:
    """Hilbert function of the real locus of X, estimated from samples.

    Batches of sample points are added until the rank fails to grow for
    two consecutive batches (or reaches the number of monomials).
    """
    d = X.dimension
    ncols = binomial(degree + d, d)
    if max_samples is None:
        max_samples = 4 * ncols + 4 * batch
    if X.parametrization is None:
        pool = X.sample(max_samples)
    basis = _TrackedBasis(ncols)
    quiet = 0
    taken = 0
    while taken < max_samples and not basis.full and quiet < 2:
        if X.parametrization is not None:
            pts = X.sample(batch, seed=seed * 1_000_003 + degree * 7919 + taken)
        else:
            pts = pool[taken:taken + batch]
            if not pts:
                break
        before = basis.rank
        basis.feed(homogeneous_rows(pts, degree))
        taken += len(pts)
        quiet = quiet + 1 if basis.rank == before else 0
    saturated = basis.full or quiet >= 2
    return HilbertEstimate(degree, basis.rank, basis.rows_used, saturated)


def variety_samples(X: VarietySpec, n: int, seed: int = 0) -> list[tuple]:
    return X.sample(n, seed)


def _parse_kv(text: str) -> dict:
    out = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {raw!r}")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def load_variety(path) -> VarietySpec:
    """Read a variety spec file (``key = value`` lines).

    Keys: ``dimension``, ``dim``, ``degree``, ``delta1``, ``delta2``,
    optional ``name``, ``equations`` (comma-separated polynomial files),
    and either ``parametrization`` (comma-separated polynomial files, one
    per coordinate) or ``samples`` (a point file). Paths are relative to
    the spec file.
    """
    path = Path(path)
    try:
        kv = _parse_kv(path.read_text())
    except OSError as exc:
        raise ParseError(f"cannot read variety spec {path}: {exc}") from exc
    base = path.parent

    def files(key):
        raw = kv.get(key, "")
        return [base / s.strip() for s in raw.split(",") if s.strip()]

    try:
        d = int(kv["dimension"])
        spec = VarietySpec(
            dimension=d, dim=int(kv["dim"]), degree=int(kv["degree"]),
            delta1=int(kv["delta1"]), delta2=int(kv["delta2"]),
            name=kv.get("name", path.stem))
    except KeyError as exc:
        raise ParseError(f"variety spec missing key {exc}") from exc
    except ValueError as exc:
        raise ParseError(f"bad integer in variety spec: {exc}") from exc
    spec.equations = tuple(read_polynomial(f, d) for f in files("equations"))
    param = files("parametrization")
    if param:
        polys = [read_polynomial(f) for f in param]
        if len({p.dimension for p in polys}) != 1:
            raise ParseError("parametrization polynomials must share one parameter count")
        spec.parametrization = tuple(polys)
    if "samples" in kv:
        spec.samples = read_points(base / kv["samples"], d)
    return spec


def linear_subspace(d: int, e: int, name: str = "") -> VarietySpec:
    """The coordinate e-plane {x_{e+1} = ... = x_d = 0} in C^d."""
    eqs = tuple(Polynomial.variable(d, i) for i in range(e, d))
    param = tuple(Polynomial.variable(e, i) if i < e else Polynomial.zero(e) for i in range(d))
    return VarietySpec(d, e, 1, 1, 1, equations=eqs, parametrization=param,
                       name=name or f"plane{e}_in_{d}")
