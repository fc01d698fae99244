"""Exact Böttcher coordinates of superattracting germs and their p-adic structure."""

from boettcher.polynomial import RationalPolynomial, mahler_expansion
from boettcher.series import QQ, QQt, Rational, SeriesError, TruncatedSeries

__version__ = "0.1.0"

__all__ = [
    "QQ",
    "QQt",
    "Rational",
    "RationalPolynomial",
    "SeriesError",
    "TruncatedSeries",
    "mahler_expansion",
]
