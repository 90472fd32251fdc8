"""Trace-norm geometric quantum discord of Bell-diagonal states under local noise."""

__version__ = "0.1.0"

from .channels import ChannelKind, apply_local_channel, bell_form_residual, evolve_correlations, kraus_set
from .discord import gqd_1norm, gqd_1norm_oracle, gqd_2norm, measure_along, trace_distance_to_measured
from .dynamics import (
    check_proposition1,
    critical_points,
    detect_kinks,
    double_sc_region,
    freezing_intervals,
    trajectory,
)
from .qstate import (
    CorrelationVector,
    bell_density_matrix,
    correlation_vector,
    eigenvalues_bell,
    hermitian_eigenvalues,
    is_physical,
    trace_norm,
)

__all__ = [
    "ChannelKind", "CorrelationVector",
    "apply_local_channel", "bell_density_matrix", "bell_form_residual", "check_proposition1",
    "correlation_vector", "critical_points", "detect_kinks", "double_sc_region",
    "eigenvalues_bell", "evolve_correlations", "freezing_intervals", "gqd_1norm",
    "gqd_1norm_oracle", "gqd_2norm", "hermitian_eigenvalues", "is_physical", "kraus_set",
    "measure_along", "trace_distance_to_measured", "trace_norm", "trajectory",
]
