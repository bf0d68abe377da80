"""Alcove arrangements of T*G/P, their Salvetti groupoid, and the formal
wall-crossing calculus on top of it."""

from .arrangement import build_window, codim2_faces, enumerate_alcoves, locate_alcove
from .coneorder import cone_leq, find_parabolic, parabolic_chambers, step_leq, verify_claim3, verify_claim4
from .rootdata import Weight, build_root_datum, is_p_regular, levi_sublattice
from .salvetti import generators, minimal_positive_galleries, relations, verify_first_relations
from .wallcross import assign_weight, normalize, path_functor, relation_check, verify_claim5

__version__ = "0.1.0"
