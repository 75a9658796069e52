"""Fuzzy formal contexts, cut concept lattices and a two-sorted weighted
modal logic for reasoning about them."""

from .core import (
    ONE,
    ZERO,
    CrispSet,
    DegreeError,
    FuzzyContext,
    FuzzySet,
    Measures,
    Sort,
    SortError,
    complement_context,
    cut,
    degree,
    derive,
    format_degree,
    measures,
    residuum,
)
from .concepts import (
    ConceptFlavor,
    ConceptLattice,
    CutConcept,
    Duality,
    closure,
    dualize,
    enumerate_concepts,
)
from .syntax import (
    Atom,
    Conj,
    DegreeSet,
    Formula,
    Nec,
    Neg,
    ParseError,
    Suff,
    Weight,
    deg_of,
    expand_derived,
    parse,
    translate_rho,
)
from .semantics import Model, TruthSet, check_concept_pair, check_prop2, consequence, satisfies, truth_set
from .calculus import (
    Bindings,
    check_bm_axioms,
    check_proof,
    instantiate_axiom,
    parse_script,
    soundness_fuzz,
    translate_script,
)
from .search import QuantizedGrid, bounded_sat, quantize_model
from .multirel import MultiContext, derived_relation
from .indices import za_equal

__version__ = "0.1.0"
