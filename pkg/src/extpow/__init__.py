"""Exact arithmetic for exterior powers of GL_n and their invariant forms."""

__version__ = "0.1.0"

from .rings import (
    DualNumbers,
    IndeterminateError,
    Integers,
    IntegersMod,
    NotInvertibleError,
    PolynomialRing,
    Rationals,
    RingElem,
    RingError,
    RingParseError,
    UnsupportedRingError,
    parse_ring,
)
from .combinat import Subset, distance, enumerate_subsets, partitions, sign_sequence
from .extrep import (
    ElementaryWord,
    RepMatrix,
    cauchy_binet,
    evaluate_word,
    exterior_torus,
    exterior_transvection,
    residue,
)
from .forms import (
    MultilinearForm,
    act_on_form,
    form_polarized,
    ideal_F_generators,
    plucker_poly,
    plucker_set,
    semi_invariance_scalar,
    stabilizes_ideal_F,
    stabilizes_plucker,
)
from .liealg import lie_dim_form_stabilizer, lie_dim_ideal_stabilizer, lie_fix_system, lie_report
from .normalizer import in_G_f, in_Gbar_F, in_Gbar_f, normalizer_equalities_demo, transports_elementary

__all__ = [
    "DualNumbers",
    "ElementaryWord",
    "IndeterminateError",
    "Integers",
    "IntegersMod",
    "MultilinearForm",
    "NotInvertibleError",
    "PolynomialRing",
    "Rationals",
    "RepMatrix",
    "RingElem",
    "RingError",
    "RingParseError",
    "Subset",
    "UnsupportedRingError",
    "act_on_form",
    "cauchy_binet",
    "distance",
    "enumerate_subsets",
    "evaluate_word",
    "exterior_torus",
    "exterior_transvection",
    "form_polarized",
    "ideal_F_generators",
    "in_G_f",
    "in_Gbar_F",
    "in_Gbar_f",
    "lie_dim_form_stabilizer",
    "lie_dim_ideal_stabilizer",
    "lie_fix_system",
    "lie_report",
    "normalizer_equalities_demo",
    "parse_ring",
    "partitions",
    "plucker_poly",
    "plucker_set",
    "residue",
    "semi_invariance_scalar",
    "sign_sequence",
    "stabilizes_ideal_F",
    "stabilizes_plucker",
    "transports_elementary",
]
