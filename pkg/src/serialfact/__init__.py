"""Serial factorizations of right ideals in finite rings, and the integer case."""
from .errors import *  # noqa: F401,F403
from .factorization import (
    SerialFactorization,
    FactorizationFailure,
    all_serial_factorizations,
    classify_all_factor,
    divisor_injection,
    find_serial_factorization,
    maximal_ideal_profile,
    overideal_factorization,
    overideal_has_factorization,
    verify_serial_factorization,
)
from .ideals import (
    RightIdeal,
    all_right_ideals,
    comaximality_criterion,
    ideal_intersection,
    ideal_product,
    ideal_sum,
    is_coindependent,
    is_two_sided,
    right_ideal,
    whole_ring,
    zero_ideal,
)
from .integers import (
    classify_int,
    divisor_lattice_product_check,
    factor_int,
    left_divisor_factorization_int,
    rigid_factorization_int,
    rigid_refinement_of_divisor,
)
from .lattice import are_similar, cyclic_homs, exists_epi, exists_mono, is_bezout_quotient, is_uniserial_quotient, overideals
from .rings import MatrixRing, Product, Quotient, UpperTriangular, ZMod, build_ring, central_idempotents, ring_axioms_report

__version__ = "0.1.0"
