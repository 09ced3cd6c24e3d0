"""Critical groups of graphs with a dihedral action, and their decomposition through quotient graphs."""

from __future__ import annotations

from .action import DihedralAction, classify_orbits, is_harmonic, validate_action
from .decomp import VerificationReport, dp_group, fast_jacobian_coprime_part, k_group, ll_group, verify_main
from .graph import Multigraph, build_graph, jacobian, spanning_tree_count
from .instances import gallery, random_harmonic
from .intalg import AbelianGroup, hnf, m_equivalent, snf
from .lattices import LatticeContext
from .quotient import quotient_graph

__all__ = [
    "AbelianGroup",
    "DihedralAction",
    "LatticeContext",
    "Multigraph",
    "VerificationReport",
    "build_graph",
    "classify_orbits",
    "dp_group",
    "fast_jacobian_coprime_part",
    "gallery",
    "hnf",
    "is_harmonic",
    "jacobian",
    "k_group",
    "ll_group",
    "m_equivalent",
    "quotient_graph",
    "random_harmonic",
    "snf",
    "spanning_tree_count",
    "validate_action",
    "verify_main",
]
