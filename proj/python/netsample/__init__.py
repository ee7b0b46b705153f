"""Sample allocation for opinion formation on networks."""

from ._core import (
    Allocation,
    Bounds,
    EquilibriumWeights,
    Graph,
    GuaranteeReport,
    InfluenceFactors,
    barabasi_albert,
    bounds,
    check_guarantee,
    clique,
    clique_closed_form,
    dual_value,
    equilibrium_weights,
    erdos_renyi,
    family_estimator,
    hypercube,
    hypercube_identity,
    integer_round,
    load_edge_list,
    random_regular,
    solve,
    star,
)

__all__ = [
    "Allocation",
    "Bounds",
    "EquilibriumWeights",
    "Graph",
    "GuaranteeReport",
    "InfluenceFactors",
    "barabasi_albert",
    "bounds",
    "check_guarantee",
    "clique",
    "clique_closed_form",
    "dual_value",
    "equilibrium_weights",
    "erdos_renyi",
    "family_estimator",
    "hypercube",
    "hypercube_identity",
    "integer_round",
    "load_edge_list",
    "random_regular",
    "solve",
    "star",
]
