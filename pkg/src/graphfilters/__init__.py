"""Graph filters: spatial propagation rules and their spectral responses.

The package treats graph propagation models (GCN, SGC, PPNP, ARMA, ...)
as one thing: a filter f(M) of a normalized graph operator M, applied to
node features as Z = f(M) X. Filters come in three families of growing
expressivity (linear, polynomial, rational); every filter also has a
closed-form frequency response that a dense spectral engine can evaluate
independently, which makes spatial-versus-spectral agreement a testable
property rather than a slogan.
"""

from .analysis import (
    BenchTable,
    SmoothingProfile,
    WalkCheckReport,
    WalkConfig,
    bench_filter,
    benchmark_graph,
    deepwalk_operator,
    dirichlet_energy,
    loglog_slope,
    monte_carlo_walk_check,
    node2vec_operator,
    oversmoothing_profile,
)
from .errors import (
    BasisMismatch,
    BudgetExceeded,
    DimensionMismatch,
    DuplicateEdge,
    GraphFilterError,
    IllConditioned,
    IndexOutOfRange,
    InputError,
    InvalidConfig,
    InvalidParam,
    IsolatedNode,
    MethodUnsupported,
    NotDiagonalizableByThisOracle,
    NotSymmetric,
    NumericalError,
    OrderTooLarge,
    ParseError,
    PoleInDomain,
    RaggedRows,
    SelfLoopInInput,
    SingularDenominator,
    SolverDiverged,
    TooLarge,
    UnknownModel,
    UnsupportedBasis,
    UnsupportedFamily,
    UnsupportedScheme,
)
from .estimators import GraphFilter, PolynomialResponseFitter, RationalResponseFitter
from .filters import (
    Family,
    FilterSpec,
    SolverOptions,
    apply_filter,
    apply_linear,
    apply_polynomial,
    apply_rational,
    compose,
    linear_filter,
    polynomial_filter,
    rational_filter,
)
from .fitting import (
    ConvergenceStudy,
    FitResult,
    ResponseTarget,
    SampledTarget,
    StepTarget,
    convergence_study,
    fit_polynomial,
    fit_rational,
)
from .graph import Graph, build_graph, degree_vector
from .io import (
    parse_edge_list,
    parse_features,
    read_filter_spec,
    write_filter_spec,
)
from .operators import (
    Scheme,
    SparseOperator,
    apply,
    build_operator,
    identity_operator,
    laplacian,
    normalized_adjacency,
)
from .presets import PRESET_NAMES, make_preset
from .spectral import (
    EquivalenceReport,
    ResponseCurve,
    SpectralDecomposition,
    check_equivalence,
    eigendecompose,
    frequency_response,
    spectral_apply,
)

__version__ = "0.1.0"

__all__ = [
    "BasisMismatch",
    "BenchTable",
    "BudgetExceeded",
    "ConvergenceStudy",
    "DimensionMismatch",
    "DuplicateEdge",
    "EquivalenceReport",
    "Family",
    "FilterSpec",
    "FitResult",
    "Graph",
    "GraphFilter",
    "GraphFilterError",
    "IllConditioned",
    "IndexOutOfRange",
    "InputError",
    "InvalidConfig",
    "InvalidParam",
    "IsolatedNode",
    "MethodUnsupported",
    "NotDiagonalizableByThisOracle",
    "NotSymmetric",
    "NumericalError",
    "OrderTooLarge",
    "PRESET_NAMES",
    "ParseError",
    "PoleInDomain",
    "PolynomialResponseFitter",
    "RaggedRows",
    "RationalResponseFitter",
    "ResponseCurve",
    "ResponseTarget",
    "SampledTarget",
    "Scheme",
    "SelfLoopInInput",
    "SingularDenominator",
    "SmoothingProfile",
    "SolverDiverged",
    "SolverOptions",
    "SparseOperator",
    "SpectralDecomposition",
    "StepTarget",
    "TooLarge",
    "UnknownModel",
    "UnsupportedBasis",
    "UnsupportedFamily",
    "UnsupportedScheme",
    "WalkCheckReport",
    "WalkConfig",
    "apply",
    "apply_filter",
    "apply_linear",
    "apply_polynomial",
    "apply_rational",
    "bench_filter",
    "benchmark_graph",
    "build_graph",
    "build_operator",
    "check_equivalence",
    "compose",
    "convergence_study",
    "deepwalk_operator",
    "degree_vector",
    "dirichlet_energy",
    "eigendecompose",
    "fit_polynomial",
    "fit_rational",
    "frequency_response",
    "identity_operator",
    "laplacian",
    "linear_filter",
    "loglog_slope",
    "make_preset",
    "monte_carlo_walk_check",
    "node2vec_operator",
    "normalized_adjacency",
    "oversmoothing_profile",
    "parse_edge_list",
    "parse_features",
    "polynomial_filter",
    "rational_filter",
    "read_filter_spec",
    "spectral_apply",
    "write_filter_spec",
]
