"""Oeljeklaus-Toma manifolds from number fields: exact certificates for the LCK rank."""

from otk.lckrank import RankReport, classify
from otk.numfield import FieldElement, NumberField
from otk.poly import IntPolynomial, RatPolynomial, parse_poly

__all__ = ["FieldElement", "IntPolynomial", "NumberField", "RankReport", "RatPolynomial", "classify", "parse_poly"]
__version__ = "0.1.0"
