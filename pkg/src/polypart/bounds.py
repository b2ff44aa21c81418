"""Closed-form Hilbert-function, degree and Betti-number bounds.

Unknown constants of the underlying theorems are caller parameters
(default 1); nothing here pretends to know them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .errors import PreconditionError
from .veronese import binomial

__all__ = [
    "binomial", "chardin_upper", "chardin_philippon_lower", "prop2_lower",
    "coprime_pair_bound", "betti_bound", "degree_inequalities",
    "InequalityCheck", "CALCULATORS",
]


def chardin_upper(degX: int, e: int, ell: int) -> int:
    """Upper bound ``deg(X) * C(ell + e, e)`` on the Hilbert function."""
    if degX < 1 or e < 0 or ell < 0:
        raise PreconditionError("need degX >= 1, e >= 0, ell >= 0")
    return degX * binomial(ell + e, e)


def chardin_philippon_lower(degX: int, delta: int, d: int, e: int, ell: int) -> int:
    """Lower bound valid once ``ell >= (d - e)(delta - 1) + 1``."""
    shift = (d - e) * (delta - 1)
    if ell < shift + 1:
        raise PreconditionError(
            f"lower bound needs ell >= {shift + 1}, got {ell}")
    return degX * binomial(ell - shift + e, e)


def prop2_lower(d: int, delta1: int, delta2: int, ell: int, c=1):
    """Piecewise lower bound for codimension-2 varieties, constant ``c`` supplied by the caller."""
    if not 1 <= delta1 <= delta2:
        raise PreconditionError("need 1 <= delta1 <= delta2")
    if ell < 1:
        raise PreconditionError("need ell >= 1")
    c = Fraction(c)
    if c <= 0:
        raise PreconditionError("constant must be positive")
    if ell <= delta1 - 1:
        value = c * (ell + 1) ** d + 1
    elif ell <= delta2 - 1:
        value = c * delta1 * (ell + 1) ** (d - 1) + 1
    else:
        value = c * delta1 * delta2 * (ell + 1) ** (d - 2) + 1
    return int(value) if value.denominator == 1 else value


def coprime_pair_bound(d: int, degX: int) -> int:
    if d < 2 or degX < 1:
        raise PreconditionError("need d >= 2 and degX >= 1")
    return d * (d - 1) * degX


def betti_bound(degs_f, deg_g: int, d: int, c=1):
    """Component-count bound ``c * prod(deg f_i) * deg(g)^(d - e)``.

    The Barone-Basu constant is unknown; ``c`` defaults to 1.
    """
    degs_f = list(degs_f)
    if any(a > b for a, b in zip(degs_f, degs_f[1:])):
        raise PreconditionError("degrees of f must be nondecreasing")
    if degs_f and deg_g < degs_f[-1]:
        raise PreconditionError("deg(g) must be at least every deg(f_i)")
    if len(degs_f) > d:
        raise PreconditionError("more equations than the ambient dimension")
    value = Fraction(c) * prod(degs_f) * deg_g ** (d - len(degs_f))
    return int(value) if value.denominator == 1 else value


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    statement: str
    passed: bool


def degree_inequalities(spec) -> list[InequalityCheck]:
    """Check declared variety invariants against the classical inequalities.

    ``spec`` needs ``dimension``, ``dim``, ``degree``, ``delta1``, ``delta2``.
    """
    d, e = spec.dimension, spec.dim
    deg, d1, d2 = spec.degree, spec.delta1, spec.delta2
    checks = [
        InequalityCheck("codimension", f"{d - 2} <= {e} <= {d}", d - 2 <= e <= d),
        InequalityCheck("delta_order", f"1 <= {d1} <= {d2}", 1 <= d1 <= d2),
        InequalityCheck("delta_le_deg", f"{d2} <= {deg}", d2 <= deg),
        InequalityCheck("deg_le_delta_power", f"{deg} <= {d2}^{d - e}",
                        e <= d and deg <= d2 ** max(d - e, 0)),
    ]
    if e == d - 2:
        checks.append(InequalityCheck(
            "deg_le_delta1_delta2", f"{deg} <= {d1}*{d2}", deg <= d1 * d2))
    return checks


CALCULATORS = {
    "binomial": (binomial, ("n", "i")),
    "chardin_upper": (chardin_upper, ("deg", "e", "ell")),
    "chardin_philippon_lower": (chardin_philippon_lower, ("deg", "delta", "d", "e", "ell")),
    "prop2_lower": (prop2_lower, ("d", "delta1", "delta2", "ell", "c")),
    "coprime_pair_bound": (coprime_pair_bound, ("d", "deg")),
    "betti_bound": (betti_bound, ("degs", "deg_g", "d", "c")),
}
