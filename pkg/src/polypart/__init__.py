"""Exact polynomial partitioning of finite point sets.

Points and polynomials carry rational coordinates and coefficients; every
sign, rank and count is computed exactly. Only the search for bisecting
hyperplanes uses floating point, and its output is always re-checked.
"""

from .errors import (CapacityTooSmall, DimensionMismatch, NoCutFound, OracleScopeExceeded,
                     ParseError, PolypartError, PreconditionError, SearchExhausted)
from .poly import PointSet, Polynomial, evaluate, parse_points, parse_polynomial, sign_at, signs
from .veronese import VeroneseBasis, hilbert_from_points, kernel_polynomial, veronese_lift
from .variety import VarietySpec, estimate_variety_hilbert, linear_subspace, load_variety
from .hamsandwich import BisectionProblem, Cut, bisect, bisect_oracle, lift_and_bisect
from .partition import (PartitionResult, ScheduleEntry, classify, partition,
                        partition_on_variety, schedule_full_space, schedule_variety)
from .incidence import (IncidenceInstance, count_incidences, generate, incidence_bound,
                        level_degrees, run_level1, st_bound)
from .estimators import PolynomialPartitioner, VarietyPartitioner, VeroneseTransformer

__version__ = "0.1.0"

__all__ = [
    "BisectionProblem", "CapacityTooSmall", "Cut", "DimensionMismatch", "IncidenceInstance",
    "NoCutFound", "OracleScopeExceeded", "ParseError", "PartitionResult", "PointSet",
    "PolynomialPartitioner", "Polynomial", "PolypartError", "PreconditionError",
    "ScheduleEntry", "SearchExhausted", "VarietyPartitioner", "VarietySpec",
    "VeroneseBasis", "VeroneseTransformer", "bisect", "bisect_oracle", "classify",
    "count_incidences", "estimate_variety_hilbert", "evaluate", "generate",
    "hilbert_from_points", "incidence_bound", "kernel_polynomial", "level_degrees",
    "lift_and_bisect", "linear_subspace", "load_variety", "parse_points",
    "parse_polynomial", "partition", "partition_on_variety", "run_level1",
    "schedule_full_space", "schedule_variety", "sign_at", "signs", "st_bound",
    "veronese_lift",
]
