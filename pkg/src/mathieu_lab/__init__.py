"""Exact computer algebra for the factorial functional and related image problems."""

from .lfunctional import L, L_power_profile, pairing
from .poly import QQ, ZZ, GF, SparsePoly, U, XiZ, Z, T, format_poly, parse_poly

__version__ = "0.1.0"

__all__ = [
    "L", "L_power_profile", "pairing", "QQ", "ZZ", "GF", "SparsePoly", "U", "XiZ", "Z", "T",
    "format_poly", "parse_poly", "__version__",
]
