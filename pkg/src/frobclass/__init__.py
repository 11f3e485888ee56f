"""Conjugacy classes of Frobenius elements in mod-l torsion representations
of elliptic curves, decided by Weil pairing comparisons.

The characteristic polynomial of the Frobenius (trace from point counting,
determinant from the norm of the prime) pins its conjugacy class except
when the trace is +-2 with determinant 1; there the class splits into two
SL2-classes, and the pairing value of a fixed global torsion basis, reduced
at the prime, separates them.
"""

from . import classify, conj, ec, errors, ff, nf, pairing, scan, selftest
from .classify import (
    ClassificationJob,
    ClassificationResult,
    brute_force_class,
    classify as run_classification,
    consistency_audit,
    minpoly_divisibility,
)
from .conj import (
    ClassDescriptor,
    MatrixModL,
    SplittingData,
    class_splits,
    exterior_form_eval,
    gl_class_of,
    sl2_class_representatives,
    sl_conjugate,
    splitting_data_general,
)
from .ec import (
    Curve,
    CurvePoint,
    TorsionBasis,
    basis_for_representative,
    count_points,
    division_polynomial,
    frobenius_matrix,
    rational_torsion_check,
    short_model,
    torsion_basis,
    torsion_field_degree,
    trace_mod_l,
)
from .ff import (
    ExtField,
    FieldElement,
    PrimeField,
    ext_field_create,
    frobenius_power,
    is_square_mod_l,
    mu_l_dlog,
    poly_roots,
    prime_field,
)
from .nf import (
    GlobalPairingDatum,
    NumberField,
    PrimeDatum,
    nf_create,
    prime_datum,
    reduce_element,
    reduce_poly,
)
from .pairing import PairingValue, pairing_power_class, weil_pairing
from .scan import ScanConfig, run_scan

__version__ = "0.1.0"
