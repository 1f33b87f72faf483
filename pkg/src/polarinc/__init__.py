"""Incidence matrices of polarized projective spaces over odd finite fields."""

from .errors import PolarincError
from .ffield import Chi, FieldSpec, make_extension_field, make_field, make_prime_field, parse_field
from .gf2mat import BitMatrix, matmul2, matpow2, rank2
from .incidence import IncidenceBundle, build_B_blocks, build_bundle
from .projgeom import PointClass, ProjPoint, QuadraticSpace
from .verifier import VerificationReport, run_all

__version__ = "0.1.0"

__all__ = [
    "BitMatrix",
    "Chi",
    "FieldSpec",
    "IncidenceBundle",
    "PointClass",
    "PolarincError",
    "ProjPoint",
    "QuadraticSpace",
    "VerificationReport",
    "build_B_blocks",
    "build_bundle",
    "make_extension_field",
    "make_field",
    "make_prime_field",
    "matmul2",
    "matpow2",
    "parse_field",
    "rank2",
    "run_all",
]
