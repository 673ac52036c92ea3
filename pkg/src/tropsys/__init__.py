"""Exact linear systems of divisors on metric graphs.

Linear systems |D| with their generators, extremals, cell complexes and
links; the induced maps to tropical projective space; and the Picard group
through critical groups of subdivisions.  All arithmetic is exact.
"""

from .divisors import (Discretization, WeightedChipFiringMove, can_fire, canonical_divisor,
                       chip_firing_function, decompose_function, decompose_weighted_move,
                       is_linearly_equivalent, level_set, order_at, principal_divisor, q_reduce,
                       rank, tropical_combine, weighted_move)
from .embedding import (EmbeddedCurve, TropicalProjectivePoint, balance, curve_degree,
                        evaluate_map, is_base_point_free, is_hyperelliptic, is_very_ample,
                        tconv_of_finite_set, unbalanced_vector)
from .errors import *  # noqa: F401,F403
from .functions import Divisor, PLFunction, tropical_sum
from .graph import (ClosedSubgraph, GraphPoint, MetricGraph, build_graph, coarsest_model,
                    components_minus, count_components_minus, graph_from_edges, is_smooth_cut_set,
                    refine, scale, subdivide)
from .linear_system import (GeneratorSet, LinearSystem, SimplicialComplex, cell_dimension,
                            enumerate_cells, express_in_generators, extremals, firing_poset,
                            generating_set, link_fine_subdivision, one_cells_at, order_complex)
from .matroid import bergman_complex, cographic_matroid, lattice_of_flats, link_contains_bergman
from .picard import (CriticalGroup, PicardClass, critical_group, emulate_vertex_firing,
                     picard_class, reduced_laplacian, smith_normal_form, superstables,
                     transition_map)

__version__ = "0.1.0"
