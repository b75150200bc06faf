"""Classification and optimal search for two-level fractional factorial designs."""

from .bounds import (
    KNOWN_MAXDET,
    BoundKind,
    BoundReport,
    barba_bound,
    bound_report,
    ehlich_wojtas_bound,
    hadamard_bound,
    mod8_prediction,
    proposition_consistency,
    saturated_class_from_det,
    two_adic_valuation,
)
from .core import (
    BinaryMatrix,
    ClassificationResult,
    DefiningRelation,
    Design,
    DesignClass,
    DesignError,
    affine_dimension,
    classify,
    confounding_kernel,
    exact_det,
    full_factorial,
    gf2_rank,
    gram_matrix,
    is_identifiable,
    normalize,
    parse_design,
    to_binary,
    to_design_matrix,
)
from .indicator import (
    IndicatorPoly,
    classify_from_indicator,
    evaluate,
    indicator_coefficients,
    support,
)

__version__ = "0.1.0"
