"""Defining-set linear codes and their generalized Hamming weights.

Construct three families of codes from explicit defining sets over finite
fields, compute their full weight hierarchies by two independent
exhaustive searches, and cross-check both against exact closed forms.
"""

from .code import CodeInstance, build_code, kernel_space, min_distance, weight_distribution
from .defsets import (
    CLASS1,
    CLASS2,
    CLASS3,
    DefiningSet,
    class1_build,
    class2_build,
    class3_build,
    class3_variant_build,
    custom_univariate_set,
)
from .errors import (
    BudgetExceededError,
    ContextMismatchError,
    FormulaUnavailableError,
    GhwlabError,
    ParameterError,
)
from .field import (
    FieldContext,
    FieldElement,
    format_element,
    make_field,
    parse_context,
    parse_element,
    relative_trace,
    trace_to_prime,
)
from .hierarchy import (
    HierarchyReport,
    HierarchyRow,
    class1_ghw,
    class2_ghw,
    class3_ghw,
    formula_ghw,
    ghw_dual_oracle,
    ghw_support_oracle,
    verify_hierarchy,
)
from .linalg import FqMatrix, Subspace, enumerate_subspaces, gaussian_binomial

__version__ = "1.0.0"

__all__ = [
    "BudgetExceededError",
    "CLASS1",
    "CLASS2",
    "CLASS3",
    "CodeInstance",
    "ContextMismatchError",
    "DefiningSet",
    "FieldContext",
    "FieldElement",
    "FormulaUnavailableError",
    "FqMatrix",
    "GhwlabError",
    "HierarchyReport",
    "HierarchyRow",
    "ParameterError",
    "Subspace",
    "build_code",
    "class1_build",
    "class1_ghw",
    "class2_build",
    "class2_ghw",
    "class3_build",
    "class3_ghw",
    "class3_variant_build",
    "custom_univariate_set",
    "enumerate_subspaces",
    "format_element",
    "formula_ghw",
    "gaussian_binomial",
    "ghw_dual_oracle",
    "ghw_support_oracle",
    "kernel_space",
    "make_field",
    "min_distance",
    "parse_context",
    "parse_element",
    "relative_trace",
    "trace_to_prime",
    "verify_hierarchy",
    "weight_distribution",
]
