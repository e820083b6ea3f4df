"""Removal-lemma machinery for finite groups: Cayley tables, equation systems,
graph representations, blow-up graphs, solution counting and arc removal."""

from .applications import commuting_pairs_removal, product_free_removal, small_doubling_removal
from .blowup import (
    BlowupGraph,
    blowup_for_system,
    build_cycle_blowup,
    build_system_blowup,
    copy_to_solution,
    count_copies,
    solution_to_copies,
)
from .counting import count_solutions, count_solutions_single, count_solutions_system, representation_function
from .cycles import (
    ColoredDigraph,
    SpanningTree,
    fundamental_cycles,
    in_cycle_space,
    integrally_generates,
    is_graph_representation,
    is_strong_representation,
    search_representation,
    search_strong_representation,
)
from .errors import (
    ConfigError,
    ContractViolation,
    GroupRemError,
    IndependenceError,
    InvalidParameter,
    RepresentationNotFound,
    SizeLimitError,
    SystemSyntaxError,
)
from .groups import (
    ElementSet,
    GroupTable,
    make_cyclic,
    make_dihedral,
    make_direct_product,
    make_symmetric,
    verify_group_axioms,
)
from .removal import exact_min_removal, greedy_arc_hitting_set, pigeonhole_reduce, removal_experiment, run_pipeline
from .systems import AbelianSystem, OrderedSystem, SingleEquation, format_system, parse_system

__version__ = "0.1.0"
