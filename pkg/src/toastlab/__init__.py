"""Toasts on lattice graphs: level-set generation, certificates built from
connected toasts (one-ended forests, balanced orientations, perfect
matchings) and independent verifiers for all of them."""
from .errors import ToastLabError
from .folner import FolnerPair, IsoFamily, folner_sets, verify_folner, verify_iso_family
from .graph_core import (
    Graph,
    ball,
    boundary,
    build_grid,
    fill,
    from_edges,
    is_full,
    n_components,
)
from .levels import LevelSets, build_toast, fill_levels, generate_level_sets, levels_to_toast, verify_level_sets
from .matching import (
    FractionalMatching,
    Matching,
    apply_circuit,
    init_fractional,
    perfect_matching,
    round_tile,
    verify_fractional,
    verify_matching,
)
from .oracles import KappaReport, kappa_search, oracle_matching, oracle_parity_exists
from .orientation import Cycle, Orientation, balanced_orientation, extract_cycle, parity_subgraph, verify_balanced
from .report import Check, Report
from .toast import Tile, Toast, layers, refine_to_connected, residual, verify_toast
from .tree import TreeCertificate, build_tree, verify_tree

__version__ = "0.1.0"
