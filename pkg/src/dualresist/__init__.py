"""First-order perturbation analysis of unit-resistor networks.

Each edge of a simple graph carries the dual-number conductance
``1 + a_hat*eps`` (eps**2 = 0). Resistance distances and the Kirchhoff index
then come out as dual numbers whose infinitesimal parts are the exact first
derivatives with respect to the perturbation.

>>> from dualresist import build_graph, resistance_mp
>>> G = build_graph(2, [(1, 2, 0.5)])
>>> print(resistance_mp(G, 1, 2))
1 + (-0.5)ε
"""
from .dual_core import DualScalar, conductance_of_edge, dual_arith, dual_reciprocal
from .dual_linalg import (
    DualMatrix,
    SolveResult,
    SpectralDecomposition,
    dual_inverse,
    dual_mp_exists,
    dual_pinv,
    dual_solve,
    one_inverse_member,
    real_pinv,
    symmetric_eigen,
)
from .errors import *  # noqa: F401,F403
from .graph_model import (
    DualLaplacian,
    Edge,
    PerturbedGraph,
    build_graph,
    is_connected,
    laplacian,
    load_graph,
    parse_graph,
    random_connected_graph,
    spanning_tree_count,
    spanning_trees_containing_edge,
)
from .oracle import (
    FDResult,
    brute_force_spanning_trees,
    finite_difference_resistance,
    one_inverse_member_independence,
)
from .perturbation import (
    EdgePerturbationResult,
    PerturbationReport,
    bound_eigsum,
    bound_specrad,
    kirchhoff_perturbation,
    perturbation_report,
    single_edge_analysis,
)
from .resistance import (
    KirchhoffValue,
    ResistanceValue,
    dual_laplacian_pinv,
    kirchhoff_index,
    node_potentials,
    resistance_block,
    resistance_matrix,
    resistance_mp,
    resistance_regularized,
)

__version__ = "0.1.0"
