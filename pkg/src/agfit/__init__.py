"""Gaussian ancestral graph models: validation, Markov queries, ML fitting."""

from .datasets import (
    MOTH_CORRELATION,
    MOTH_LABELS,
    MOTH_MODEL_LABELS,
    MOTH_N,
    data_path,
    moth_correlation,
    moth_graph,
    moth_graph_extended,
    moth_stats,
)
from .errors import (
    AgfitError,
    ConditionOneViolated,
    ConditionTwoViolated,
    DimensionMismatch,
    GraphError,
    GraphParseError,
    GraphTooLarge,
    InvalidCoding,
    InvalidDf,
    LabelMismatch,
    MaxIterationsExceeded,
    MultiEdge,
    NotMaximal,
    NotPositiveDefinite,
    NumericError,
    OverlappingSets,
    SelfLoop,
    SingularDesign,
    SingularMatrix,
    UnknownVertex,
)
from .fit import FitConfig, FitResult, fit, fit_dag_closed_form, fit_undirected_ipf, icf_step
from .graph import (
    AncestralGraph,
    Decomposition,
    Edge,
    Relations,
    read_graph_csv,
    write_graph_csv,
)
from .mseparation import (
    IndependenceStatement,
    SeparationQuery,
    implied_pairwise_independences,
    is_maximal,
    m_connecting_path_exists,
    m_separated,
    maximal_completion,
    separating_set,
)
from .params import (
    IndexMap,
    ParamSet,
    build_sigma,
    conditional_variance,
    pseudo_variables,
    psi,
    residuals,
)
from .sim import (
    CycleSpec,
    ExperimentReport,
    PSummary,
    ReplicateResult,
    bidirected_cycle_graph,
    cycle_covariance,
    run_scaling_experiment,
    sample_mvn,
)
from .stats import (
    SampleStats,
    chi_square_pvalue,
    degrees_of_freedom,
    deviance,
    empirical_covariance,
    log_likelihood,
)

__version__ = "0.1.0"

__all__ = [
    "AgfitError",
    "AncestralGraph",
    "ConditionOneViolated",
    "ConditionTwoViolated",
    "CycleSpec",
    "Decomposition",
    "DimensionMismatch",
    "Edge",
    "ExperimentReport",
    "FitConfig",
    "FitResult",
    "GraphError",
    "GraphParseError",
    "GraphTooLarge",
    "IndependenceStatement",
    "IndexMap",
    "InvalidCoding",
    "InvalidDf",
    "LabelMismatch",
    "MOTH_CORRELATION",
    "MOTH_LABELS",
    "MOTH_MODEL_LABELS",
    "MOTH_N",
    "MaxIterationsExceeded",
    "MultiEdge",
    "NotMaximal",
    "NotPositiveDefinite",
    "NumericError",
    "OverlappingSets",
    "PSummary",
    "ParamSet",
    "Relations",
    "ReplicateResult",
    "SampleStats",
    "SelfLoop",
    "SeparationQuery",
    "SingularDesign",
    "SingularMatrix",
    "UnknownVertex",
    "bidirected_cycle_graph",
    "build_sigma",
    "chi_square_pvalue",
    "conditional_variance",
    "cycle_covariance",
    "data_path",
    "degrees_of_freedom",
    "deviance",
    "empirical_covariance",
    "fit",
    "fit_dag_closed_form",
    "fit_undirected_ipf",
    "icf_step",
    "implied_pairwise_independences",
    "is_maximal",
    "log_likelihood",
    "m_connecting_path_exists",
    "m_separated",
    "maximal_completion",
    "moth_correlation",
    "moth_graph",
    "moth_graph_extended",
    "moth_stats",
    "pseudo_variables",
    "psi",
    "read_graph_csv",
    "residuals",
    "run_scaling_experiment",
    "sample_mvn",
    "separating_set",
    "write_graph_csv",
]
