from .audit import MAXDET_TABLE, AuditRow, conjecture_audit, known_maxdet
from .criteria import (
    Criterion,
    SearchResult,
    SingularInformationError,
    a_value,
    d_value,
    e_value,
)
from .exhaustive import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    argmax_agreement,
    class_census,
    exhaustive_search,
    iter_normalized,
    optimal_sets,
    saturated_exhaustive,
    search_space_size,
)
from .local import matrix_to_design, saturated_local_search
from .polyroots import RootInterval, charpoly, compare_roots, smallest_real_root

__all__ = [
    "MAXDET_TABLE",
    "AuditRow",
    "BudgetExceeded",
    "Criterion",
    "DEFAULT_BUDGET",
    "RootInterval",
    "SearchResult",
    "SingularInformationError",
    "a_value",
    "argmax_agreement",
    "charpoly",
    "class_census",
    "compare_roots",
    "conjecture_audit",
    "d_value",
    "e_value",
    "exhaustive_search",
    "iter_normalized",
    "known_maxdet",
    "matrix_to_design",
    "optimal_sets",
    "saturated_exhaustive",
    "saturated_local_search",
    "search_space_size",
    "smallest_real_root",
]
