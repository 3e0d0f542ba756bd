"""Exact mixed multiplicities of ideals in graded quotient rings.

An exact computer-algebra engine (polynomials, Groebner bases, the ideal
calculus, Hilbert-series lengths) plus windowed checkers for superficial
and (FC)-sequences and the claims relating mixed multiplicities to
Hilbert-Samuel multiplicities.
"""

from .polyring import (
    FieldSpec, QQ, prime_field,
    MonomialOrder, GREVLEX, LEX, elimination_order, compare_monomials,
    Polynomial, RingPresentation, ParseError, parse_polynomial,
    monomials_of_degree,
)
from .groebner import GroebnerBasis, buchberger, eliminate, normal_form
from .idealops import (
    IdealPresentation, PowerProducts, NilpotentProductError,
    quotient_ring, map_ideal, maximal_ideal,
)
from .invariants import (
    EMPTY, INFINITE, StabilizationError, HilbertNumerator,
    krull_dimension, hilbert_numerator, length_quotient, ring_length,
    samuel_multiplicity,
)
from .bhattacharya import (
    BhattacharyaGrid, MixedMultiplicityTable,
    evaluate_grid, certify_degree, mixed_multiplicities,
    product_ideal, saturation_dimension,
)
from .sequences import (
    ExponentWindow, WindowCheck, DimCheck, ElementCertificate, SequenceCertificate,
    check_fc1, check_fc2, check_fc3, check_superficial,
    colon_ladder_check, torsion_meets_window_power,
    is_weak_fc, is_fc, sample_element, find_sequence,
)
from .theorems import (
    TheoremReport, PreconditionError, CONFIRMED, COUNTEREXAMPLE, INCONCLUSIVE,
    check_prop6, check_thm3, check_thm5, check_remark7, check_remark2,
)

__version__ = "0.1.0"
