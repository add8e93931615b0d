"""3D partitions, the equivariant vertex measure and its McMahon identity."""

from .legged import legged_counting_series, minimal_volume
from .plane import (
    PlanePartition,
    enumerate_legged,
    enumerate_plane_partitions,
    plane_partitions_by_size,
    renormalized_volume,
)
from .vertex import (
    ExponentPolynomial,
    FactoredWeight,
    TorusWeights,
    box_character,
    cy_direction,
    layer_sum,
    probe_direction,
    evaluate_weight,
    gamma,
    interaction_factor,
    mcmahon_identity_residual,
    vertex_character,
    vertex_series,
    weight,
)

__all__ = [
    "PlanePartition",
    "enumerate_legged",
    "enumerate_plane_partitions",
    "plane_partitions_by_size",
    "renormalized_volume",
    "legged_counting_series",
    "minimal_volume",
    "ExponentPolynomial",
    "FactoredWeight",
    "TorusWeights",
    "box_character",
    "cy_direction",
    "layer_sum",
    "probe_direction",
    "evaluate_weight",
    "gamma",
    "interaction_factor",
    "mcmahon_identity_residual",
    "vertex_character",
    "vertex_series",
    "weight",
]
