"""Entropic quantities and state-redistribution costs for small multipartite
quantum states."""

from .entropy import (
    EntropyReport,
    RolePartition,
    conditional_entropy,
    conditional_mutual_information,
    entropy,
    full_report,
    mutual_information,
)
from .linalg import (
    DensityMatrix,
    Spectrum,
    StateVector,
    dim_cap,
    eig_spectrum,
    partial_trace,
    purify,
    random_pure_state,
    random_unitary,
    tensor_product,
    trace_distance,
)
from .tasks import (
    CostPair,
    CostRegion,
    MergingCosts,
    composability_check,
    fqrs_corner,
    fqsw_corner,
    is_achievable,
    merging_costs,
    redistribution_corner,
    redistribution_region,
    time_reversal_dual,
)

__version__ = "0.1.0"

__all__ = [
    "composability_check",
    "conditional_entropy",
    "conditional_mutual_information",
    "CostPair",
    "CostRegion",
    "DensityMatrix",
    "dim_cap",
    "eig_spectrum",
    "entropy",
    "EntropyReport",
    "fqrs_corner",
    "fqsw_corner",
    "full_report",
    "is_achievable",
    "merging_costs",
    "MergingCosts",
    "mutual_information",
    "partial_trace",
    "purify",
    "random_pure_state",
    "random_unitary",
    "redistribution_corner",
    "redistribution_region",
    "RolePartition",
    "Spectrum",
    "StateVector",
    "tensor_product",
    "time_reversal_dual",
    "trace_distance",
]
