"""Random-graph models of secure sensor networks built on shared-key links,
with closed-form predictions and reproducible Monte Carlo experiments.

A network of n sensors draws key rings from a common pool; two sensors can
talk securely when their rings share at least q keys and the radio channel
between them happens to be on. This package samples the resulting random
graphs, evaluates the exact and limiting formulas for link probability,
k-connectivity, and minimum degree, and runs seeded experiments that compare
the two.
"""

from .connectivity import (
    DegreeCensus,
    brute_force_k_connected,
    degree_census,
    is_k_connected,
    vertex_connectivity,
)
from .experiments import (
    ConfigError,
    ExperimentConfig,
    SummaryRow,
    TrialRecord,
    coupling_experiment,
    degree_census_experiment,
    dominance_experiment,
    run,
    wilson_interval,
    write_records_csv,
    write_records_jsonl,
    write_summary_csv,
    write_summary_jsonl,
)
from .graph import Graph
from .models import (
    KeyAssignment,
    ModelParams,
    Seed,
    intersection_graph,
    sample_binomial_rings,
    sample_composed,
    sample_coupled_pair,
    sample_er,
    sample_uniform_rings,
)
from .theory import (
    CouplingParams,
    ScalingPoint,
    UnsupportedRegimeError,
    asymptotic_s,
    coupling_x,
    coupling_y,
    er_k_connectivity_prediction,
    exact_overlap_pmf,
    exact_s_probability,
    exact_t_probability,
    k_star,
    poisson_degree_mean,
    predicted_k_connectivity,
    predicted_min_degree_at_least_k,
    scaling_alpha,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "CouplingParams",
    "DegreeCensus",
    "ExperimentConfig",
    "Graph",
    "KeyAssignment",
    "ModelParams",
    "ScalingPoint",
    "Seed",
    "SummaryRow",
    "TrialRecord",
    "UnsupportedRegimeError",
    "asymptotic_s",
    "brute_force_k_connected",
    "coupling_experiment",
    "coupling_x",
    "coupling_y",
    "degree_census",
    "degree_census_experiment",
    "dominance_experiment",
    "er_k_connectivity_prediction",
    "exact_overlap_pmf",
    "exact_s_probability",
    "exact_t_probability",
    "intersection_graph",
    "is_k_connected",
    "k_star",
    "poisson_degree_mean",
    "predicted_k_connectivity",
    "predicted_min_degree_at_least_k",
    "run",
    "sample_binomial_rings",
    "sample_composed",
    "sample_coupled_pair",
    "sample_er",
    "sample_uniform_rings",
    "scaling_alpha",
    "vertex_connectivity",
    "wilson_interval",
    "write_records_csv",
    "write_records_jsonl",
    "write_summary_csv",
    "write_summary_jsonl",
    "__version__",
]
