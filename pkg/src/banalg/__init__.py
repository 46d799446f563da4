"""Truncated checks for diagonal division bounds, homotopy epimorphisms of
analytic algebras, derived localizations and Hochschild homology."""

from .complexes import AlgebraMap, ChainComplex, TruncatedAlgebra, diagonal_koszul, koszul, tensor_over
from .division import (
    BoundCertificate,
    certify_formal_weight_transform,
    certify_poly_bound,
    certify_stein,
    certify_tate_coefficientwise,
    diag_divide,
    disc_counterexample,
)
from .errors import (
    BanalgError,
    DescriptorMismatch,
    DiagonalError,
    ParseError,
    PrecisionError,
    SizeGuardError,
    TruncationError,
    UnsupportedCase,
    WitnessError,
)
from .hepi import check_strictness_condition, verify_hepi
from .hochschild import FiniteAlgebra, hh_bar, hh_base_change, hh_complete_intersection, hh_koszul
from .localization import laurent, rational, verify_localization, weierstrass
from .scalars import BanachRingDescriptor, PAdic, Scalar
from .series import Dagger, Disc, FormalPS, Hybrid, MultiSeries, Polynomial, Stein, Tate, parse_flavor, parse_series

__version__ = "0.1.0"
