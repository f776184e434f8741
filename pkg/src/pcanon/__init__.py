"""Exact computation of Hecke-algebra pairings, Soergel-bimodule Hom spaces,
p-canonical bases from local intersection forms, antispherical p-Kazhdan-
Lusztig polynomials, and tilting character multiplicities."""

from .laurent import LaurentPoly, parse_laurent
from .cartan import (GeneralizedCartanMatrix, KacMoodyRootDatum, named_gcm,
                     affinize, gcm_from_json, simply_connected_datum,
                     adjoint_datum, positive_roots, highest_root,
                     coxeter_number)
from .coxeter import (CoxeterElement, CoxeterSystem, coxeter_from_gcm,
                      AffineWeylGroup, affine_weyl_group,
                      affine_weyl_group_of_type, IDENTITY)
from .errors import InputError, ResourceCapError, InternalInconsistencyError
from .hecke import HeckeAlgebra, HeckeElement, AntisphericalElement

__all__ = [
    "LaurentPoly", "parse_laurent",
    "GeneralizedCartanMatrix", "KacMoodyRootDatum", "named_gcm", "affinize",
    "gcm_from_json", "simply_connected_datum", "adjoint_datum",
    "positive_roots", "highest_root", "coxeter_number",
    "CoxeterElement", "CoxeterSystem", "coxeter_from_gcm",
    "AffineWeylGroup", "affine_weyl_group", "affine_weyl_group_of_type",
    "IDENTITY",
    "InputError", "ResourceCapError", "InternalInconsistencyError",
    "HeckeAlgebra", "HeckeElement", "AntisphericalElement",
]

__version__ = "0.1.0"
