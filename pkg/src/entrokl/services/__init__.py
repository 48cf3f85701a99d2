"""Computational services."""

from entrokl.services.conditions import (
    check_condition_A,
    check_condition_B,
    check_condition_C1,
    check_gaussian_minorization,
    check_log_integrability,
    functional_K,
    functional_Q,
    functional_T,
    gaussian_probe_points,
    local_average,
    maximal_function,
    minimal_function,
    verify_log_moment_identities,
)
from entrokl.services.densities import AnalyticDensity, parse_density_spec
from entrokl.services.diagnostics import (
    check_cdf_envelopes,
    conditional_law_report,
    conditional_log_moments,
    exact_cdf_agreement,
    exact_conditional_cdf,
    simulate_xi,
)
from entrokl.services.estimator import estimate_entropy, kl_entropy, kl_entropy_with_jitter
from entrokl.services.exceptions import (
    DensitySpecError,
    DimensionMismatchError,
    DuplicatePointsError,
    EntroklError,
    ExperimentCellError,
    OutsideSupportError,
    PointsFileError,
    QuadratureError,
    SampleError,
    SimulationError,
    UnsupportedDensityError,
)
from entrokl.services.experiments import convergence_study, variance_decomposition
from entrokl.services.neighbors import nn_distances, nn_distances_brute, nn_distances_tree
from entrokl.services.seeding import derive_seed, make_rng
from entrokl.services.storage import (
    load_density_spec,
    read_points_csv,
    render_report,
    write_points_csv,
    write_records_csv,
)

__all__ = [
    "AnalyticDensity",
    "DensitySpecError",
    "DimensionMismatchError",
    "DuplicatePointsError",
    "EntroklError",
    "ExperimentCellError",
    "OutsideSupportError",
    "PointsFileError",
    "QuadratureError",
    "SampleError",
    "SimulationError",
    "UnsupportedDensityError",
    "check_cdf_envelopes",
    "check_condition_A",
    "check_condition_B",
    "check_condition_C1",
    "check_gaussian_minorization",
    "check_log_integrability",
    "conditional_law_report",
    "conditional_log_moments",
    "convergence_study",
    "derive_seed",
    "estimate_entropy",
    "exact_cdf_agreement",
    "exact_conditional_cdf",
    "functional_K",
    "functional_Q",
    "functional_T",
    "gaussian_probe_points",
    "kl_entropy",
    "kl_entropy_with_jitter",
    "load_density_spec",
    "local_average",
    "make_rng",
    "maximal_function",
    "minimal_function",
    "nn_distances",
    "nn_distances_brute",
    "nn_distances_tree",
    "parse_density_spec",
    "read_points_csv",
    "render_report",
    "simulate_xi",
    "variance_decomposition",
    "verify_log_moment_identities",
    "write_points_csv",
    "write_records_csv",
]
