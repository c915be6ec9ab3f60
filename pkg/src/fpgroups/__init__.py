"""Finitely presented groups: words, presentations, homology, subgroups, L2 invariants
and Kähler-group verdicts."""

from .words import Word, parse_word, free_reduce, cyclic_reduce, power_decompose, exponent_vector
from .presentations import (
    Presentation,
    OrbifoldSignature,
    Family,
    orbifold_presentation,
    one_relator_orbifold,
    surface_presentation,
    product_presentation,
    cyclic_presentation,
    free_abelian_presentation,
    free_presentation,
    parse_presentation,
    format_presentation,
    deficiency_lower_bound,
)
from .homology import abelianization, smith_normal_form, kunneth_betti, morse_upper_bound
from .subgroups import coset_enumerate, low_index_subgroups, reidemeister_schreier
from .classify import GroupFacts, classify, recognize_orbifold_form, deficiency_table

__version__ = "0.1.0"
