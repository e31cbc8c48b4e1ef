"""Covering rooted trees with energy-limited agents that recharge at the root."""

from .exact import (bc_min_distance, bc_min_immersions, brute_force_min_distance,
                    brute_force_min_immersions)
from .heuristics import dftn, sweeping_leaves
from .immersion import (CoverSolution, Immersion, added_cost, consecutive_leaf_cost,
                        immersion_cost, is_feasible, verify_solution)
from .scheduling import (brute_force_makespan, brute_force_min_time, dp_makespan_partition,
                         min_time_heuristic)
from .tree import (InfeasibleInstance, InstanceParams, RootedTree, TreeError, dfs_leaf_order,
                   height, node_distance, parse_tree, random_tree, serialize_tree,
                   validate_instance)

__all__ = [
    "RootedTree", "InstanceParams", "TreeError", "InfeasibleInstance",
    "parse_tree", "serialize_tree", "height", "node_distance", "dfs_leaf_order",
    "random_tree", "validate_instance",
    "Immersion", "CoverSolution", "immersion_cost", "added_cost", "consecutive_leaf_cost",
    "is_feasible", "verify_solution",
    "sweeping_leaves", "dftn",
    "bc_min_distance", "bc_min_immersions", "brute_force_min_distance",
    "brute_force_min_immersions",
    "dp_makespan_partition", "brute_force_makespan", "min_time_heuristic",
    "brute_force_min_time",
]
