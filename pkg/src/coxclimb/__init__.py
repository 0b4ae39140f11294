"""Climbing and falling elements of finite Coxeter groups.

Builds bipartite reflection orders, the associahedron fan obtained by
coarsening the Coxeter fan, and the climbing/falling elements bounding
each of its chamber classes.
"""

from .analysis import Analysis
from .bipartite import (BipartiteOrder, bipartite_coloring, build_order, coxeter_element,
                        longest_element, mu_map, rho_mu_sequences, verify_sign_table)
from .catalan import (DualSystem, EquivClass, all_climbing, build_dual, catalan_number,
                      classes, climbing_of_facet, falling_of_facet, sortable_oracle)
from .errors import *  # noqa: F401,F403
from .fan import (Facet, FacetLocator, N_of, enumerate_facets, facet_of_chamber,
                  filtration_Z, neighbor_across)
from .geometry import (CoxeterSystem, GroupElement, Root, build_system, enumerate_group,
                       inversion_set, inversions_from_word, positive_roots, reflection,
                       weak_order_leq)
from .papi import (PositiveTriple, is_climbing, is_falling, nonsimple_decomposition,
                   papi_check, positive_triples, word_from_ordered_roots)

__version__ = "0.1.0"
