"""Rigorous lower bounds for the convergence radii of Mayer and virial series.

The package verifies the combinatorial machinery the bounds rest on
(connected-graph/tree sums, the Kruskal-based partition scheme of labeled
graphs) at desk scale, estimates stability constants, evaluates the radial
integrals C(beta) and Ctilde(beta), and assembles three convergence-radius
lower bounds plus their comparison ratio.
"""

from .analysis import (
    QuadratureResult,
    RadiiReport,
    build_radii_report,
    density_lower_bound,
    density_lower_bound_series,
    integral_C,
    integral_Ctilde,
    lp_gain,
    lp_gain_argmax,
    radius_lebowitz_penrose,
    radius_mayer,
    radius_virial_basuev,
    tree_function,
    tree_function_series,
)
from .cluster import (
    Box,
    Configuration,
    MayerEstimate,
    bound_penrose_ruelle,
    bound_tree_basuev,
    bound_tree_stability,
    mayer_coefficient_mc,
    pair_distances,
    pair_energy_sum,
    penrose_tree_sum,
    scheme_stability_gap,
    scheme_stability_gap_min,
    ursell_direct,
)
from .errors import CapacityError, TemperednessError, UnsupportedPotentialError
from .graphs import (
    EdgeOrder,
    LabeledGraph,
    LabeledTree,
    PartitionReport,
    build_edge_order,
    enumerate_connected,
    enumerate_trees,
    kruskal_min_tree,
    scheme_map,
    verify_partition,
)
from .potentials import (
    PairPotential,
    hard_sphere,
    lennard_jones,
    potential_from_config,
    square_well,
    tabulated,
)
from .stability import (
    StabilityCheckReport,
    StabilityEstimate,
    check_stability_inequalities,
    close_packed_patch,
    coordination_number,
    estimate_stability,
    simplex_configuration,
    unit_distance_pair_count,
)

__version__ = "0.1.0"

__all__ = [
    "Box",
    "CapacityError",
    "Configuration",
    "EdgeOrder",
    "LabeledGraph",
    "LabeledTree",
    "MayerEstimate",
    "PairPotential",
    "PartitionReport",
    "QuadratureResult",
    "RadiiReport",
    "StabilityCheckReport",
    "StabilityEstimate",
    "TemperednessError",
    "UnsupportedPotentialError",
    "bound_penrose_ruelle",
    "bound_tree_basuev",
    "bound_tree_stability",
    "build_edge_order",
    "build_radii_report",
    "check_stability_inequalities",
    "close_packed_patch",
    "coordination_number",
    "density_lower_bound",
    "density_lower_bound_series",
    "enumerate_connected",
    "enumerate_trees",
    "estimate_stability",
    "hard_sphere",
    "integral_C",
    "integral_Ctilde",
    "kruskal_min_tree",
    "lennard_jones",
    "lp_gain",
    "lp_gain_argmax",
    "mayer_coefficient_mc",
    "pair_distances",
    "pair_energy_sum",
    "penrose_tree_sum",
    "potential_from_config",
    "radius_lebowitz_penrose",
    "radius_mayer",
    "radius_virial_basuev",
    "scheme_map",
    "scheme_stability_gap",
    "scheme_stability_gap_min",
    "simplex_configuration",
    "square_well",
    "tabulated",
    "tree_function",
    "tree_function_series",
    "unit_distance_pair_count",
    "ursell_direct",
    "verify_partition",
]
