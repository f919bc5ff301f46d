"""torstrat: reconstruct orbit-type stratification data of torus actions
from their equivariant cohomology algebras, in exact rational arithmetic.
"""

from .algebra import AlgebraPresentation, GKMGraph, build_from_gkm, forget_embedding, \
    localize, to_localized_coords, validate
from .cohom import betti_sum, euler_factorize, gkm_detect, gkm_graph, \
    restriction_map, stratum_cohomology
from .exact import Poly, RatFun, divide_exact, factor_into_linear_forms, normalize_ratfun
from .lattice import Subtorus, enumerate_candidate_subtori, in_SU
from .strat import Reconstruction, build_chi_prime, inclusion, poset_isomorphic, \
    ramified_subposet, resolve_stratum, scalar_part
from .thom import ThomSystem, construct_thom_system, is_nilpotent, \
    minimal_strict_thom_system, nilradical, split_components, verify_strict, \
    verify_thom_system

__version__ = "0.1.0"
