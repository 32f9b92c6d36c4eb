"""Exact algebra for 2-equipped posets and their corepresentations over F < G."""
from .fields import Tower, GElem, make_tower, preset, gf2_tower, gf3_tower, qsqrt2_tower
from .poset import EquippedPoset, build_poset, dual_poset, one_parameter_criterion, sincere_class
from .subspace import FSub
from .tits import DimVector, tits_form, classify_vector
from .corep import MatrixCorep, CorepSpaces, spaces_of, dim_vector, decompose, is_indecomposable, are_isomorphic

__version__ = "0.1.0"
