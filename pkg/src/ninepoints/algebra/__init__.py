from .groebner import Ideal, groebner, lex_basis, normal_form, spoly
from .linalg import det, det3, minors, nullspace, rank_exact, rank_mod_p
from .poly import DEGREVLEX, LEX, PARAM_NAMES, XYZ, MonomialOrder, MPoly, parse_poly
from .quadext import QuadExt, format_field, parse_field, squarefree_part
from .univariate import NoSolvableRootError, RootField, roots_in_field, univariate_root_field

__all__ = [
    "DEGREVLEX",
    "LEX",
    "PARAM_NAMES",
    "XYZ",
    "Ideal",
    "MPoly",
    "MonomialOrder",
    "NoSolvableRootError",
    "QuadExt",
    "RootField",
    "det",
    "det3",
    "format_field",
    "groebner",
    "lex_basis",
    "minors",
    "normal_form",
    "nullspace",
    "parse_field",
    "parse_poly",
    "rank_exact",
    "rank_mod_p",
    "roots_in_field",
    "spoly",
    "squarefree_part",
    "univariate_root_field",
]
