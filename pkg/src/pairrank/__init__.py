"""pairrank: rankings from pairwise comparisons.

Strengths are fitted by simple coordinate fixed-point iterations: the classic
rule, a much faster variant, the one-parameter family containing both, plus
MAP (logistic-prior) and tie-aware generalizations.  Companion modules cover
strong-connectivity preprocessing, synthetic tournament generation,
asymptotic convergence-rate analysis, and an iteration-count benchmark
harness.  See the README and demos/ for worked examples.
"""

from .core import (
    Adjacency,
    ComparisonData,
    DegenerateNu,
    DegenerateStrength,
    FitResult,
    FitTrace,
    InvalidStrengths,
    MaxSweepsExceeded,
    ModelMismatchWarning,
    NegativeCount,
    NotConverged,
    NotStronglyConnected,
    PairRankError,
    PairTable,
    ParseError,
    RedrawLimitExceeded,
    SelfMatch,
    SolverSpec,
    Strengths,
    normalize_geometric_mean,
    validate,
)
from .likelihood import (
    Objective,
    gradient_residual,
    gradient_residual_map,
    gradient_residual_ties,
    log_likelihood,
    log_likelihood_ties,
    log_posterior,
    stationarity_residual_nu,
)
from .solvers import (
    UpdateRule,
    fit,
    objective_for,
    rule_for,
    sweep,
    update_alpha,
    update_map,
    update_ties_nu,
    update_ties_pi,
)
from .graph import (
    InteractionDigraph,
    interaction_digraph,
    restrict_to_largest_scc,
    strongly_connected_components,
)
from .synth import (
    SynthResult,
    SynthSpec,
    generate_tournament,
    generate_tournament_ties,
    sample_logistic_scores,
)
from .rates import (
    RateReport,
    convergence_factor,
    convergence_factor_max,
    convergence_factor_zermelo,
    convergence_report,
    dlambda_dalpha,
)
from .bench import (
    AlgorithmBench,
    BenchReport,
    BenchSpec,
    TraceTable,
    iterations_to_convergence,
    reference_fit,
    rms_p1_deviation,
    run_bench,
    trace_run,
)

__version__ = "0.1.0"

__all__ = [
    "Adjacency",
    "AlgorithmBench",
    "BenchReport",
    "BenchSpec",
    "ComparisonData",
    "DegenerateNu",
    "DegenerateStrength",
    "FitResult",
    "FitTrace",
    "InteractionDigraph",
    "InvalidStrengths",
    "MaxSweepsExceeded",
    "ModelMismatchWarning",
    "NegativeCount",
    "NotConverged",
    "NotStronglyConnected",
    "Objective",
    "PairRankError",
    "PairTable",
    "ParseError",
    "RateReport",
    "RedrawLimitExceeded",
    "SelfMatch",
    "SolverSpec",
    "Strengths",
    "SynthResult",
    "SynthSpec",
    "TraceTable",
    "UpdateRule",
    "convergence_factor",
    "convergence_factor_max",
    "convergence_factor_zermelo",
    "convergence_report",
    "dlambda_dalpha",
    "fit",
    "generate_tournament",
    "generate_tournament_ties",
    "gradient_residual",
    "gradient_residual_map",
    "gradient_residual_ties",
    "interaction_digraph",
    "iterations_to_convergence",
    "log_likelihood",
    "log_likelihood_ties",
    "log_posterior",
    "normalize_geometric_mean",
    "objective_for",
    "reference_fit",
    "restrict_to_largest_scc",
    "rms_p1_deviation",
    "rule_for",
    "run_bench",
    "sample_logistic_scores",
    "stationarity_residual_nu",
    "strongly_connected_components",
    "sweep",
    "trace_run",
    "update_alpha",
    "update_map",
    "update_ties_nu",
    "update_ties_pi",
    "validate",
]
