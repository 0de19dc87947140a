"""Zeta functions of hypersurfaces over prime fields by Dwork's p-adic methods."""

from .padic import PadicInt, PiElem, PrecisionError, teichmuller
from .poly import HomogeneousPoly, dwork_quartic, fermat, parse_poly
from .zeta import ZetaData, verify_report, zeta_fit

__version__ = "0.1.0"

__all__ = [
    "PadicInt",
    "PiElem",
    "PrecisionError",
    "teichmuller",
    "HomogeneousPoly",
    "dwork_quartic",
    "fermat",
    "parse_poly",
    "ZetaData",
    "verify_report",
    "zeta_fit",
]
