"""Graded characters of Demazure, Weyl and thick Weyl modules over twisted
affine root systems, with the triangular expansions between them."""

from .afweight import (
    AffineWeight,
    cherednik_leq,
    orbit_equiv,
    sigma_contains,
    to_dominant_affine,
)
from .cartan import RootSystem, build_root_system, decompose_slice, finite_irrep_char
from .charring import GradedCharacter, QPoly, apply_word, demazure_op, saturate
from .demazure import (
    RootMultiplicityTable,
    integrable_gch,
    projective_gch,
    thick_weyl_gch,
    thin_gch,
    weyl_gch,
    weyl_kac_check,
)
from .expand import Basis, Expansion, branching_weyl, expand_symmetric, expand_thin, kostka

__version__ = "0.1.0"

__all__ = [
    "AffineWeight",
    "Basis",
    "Expansion",
    "GradedCharacter",
    "QPoly",
    "RootMultiplicityTable",
    "RootSystem",
    "apply_word",
    "branching_weyl",
    "build_root_system",
    "cherednik_leq",
    "decompose_slice",
    "demazure_op",
    "expand_symmetric",
    "expand_thin",
    "finite_irrep_char",
    "integrable_gch",
    "kostka",
    "orbit_equiv",
    "projective_gch",
    "saturate",
    "sigma_contains",
    "thick_weyl_gch",
    "thin_gch",
    "to_dominant_affine",
    "weyl_gch",
    "weyl_kac_check",
]
