"""Exact nondominated sets of multi-objective integer problems via the scion tree
of lexicographic epsilon-constraint scalarizations."""

from .core import (
    MINUS_INF,
    PLUS_INF,
    Combination,
    DimensionError,
    ExplicitSet,
    Image,
    Infinity,
    Knapsack,
    Parameter,
    Permutation,
    SentinelArithmeticError,
    TinyIlp,
    dominates,
    lex_less,
    viable_parameter,
)
from .engine import (
    ConfigurationError,
    EngineConfig,
    EngineError,
    RunReport,
    run,
    scion_candidates,
    solve_images,
    storage_rule,
)
from .io import ParseError, generate_instance, parse_instance, serialize_images, serialize_instance
from .scalarizer import (
    Backend,
    BackendError,
    ExplicitSetBackend,
    KnapsackBackend,
    ScalarizationAnswer,
    ScalarizationQuery,
    TinyIlpBackend,
    make_backend,
    solve,
)
from .warmstart import CascadeReport, CascadeVerificationError, compute_level, run_cascade

__version__ = "0.1.0"
