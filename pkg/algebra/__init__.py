from .field import (
    FieldSpec,
    FieldElement,
    RootOfUnity,
    ff_mul,
    ff_inv,
    primitive_element,
    primitive_root_of_unity,
    element_encode,
    element_decode,
    element_hex,
    element_from_hex,
    field_for,
    GF4,
    GF9,
    GF512,
)
from .poly import (
    binomial_mod,
    multi_indices,
    hasse_length,
    HasseVector,
    SparseUniPoly,
    SparseMultiPoly,
    Curve,
    uni_eval,
    uni_hasse,
    uni_hasse_eval,
    uni_mod_cyclotomic,
    uni_mod_linear_power,
    multi_hasse_eval,
    curve_hasse,
    compose_hasse,
)
from .linalg import solve_linear

__all__ = [
    # Field
    "FieldSpec",
    "FieldElement",
    "RootOfUnity",
    "ff_mul",
    "ff_inv",
    "primitive_element",
    "primitive_root_of_unity",
    "element_encode",
    "element_decode",
    "element_hex",
    "element_from_hex",
    "field_for",
    "GF4",
    "GF9",
    "GF512",
    # Polynomials
    "binomial_mod",
    "multi_indices",
    "hasse_length",
    "HasseVector",
    "SparseUniPoly",
    "SparseMultiPoly",
    "Curve",
    "uni_eval",
    "uni_hasse",
    "uni_hasse_eval",
    "uni_mod_cyclotomic",
    "uni_mod_linear_power",
    "multi_hasse_eval",
    "curve_hasse",
    "compose_hasse",
    # Linear algebra
    "solve_linear",
]
