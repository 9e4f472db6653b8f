"""Exact symmetry analysis and numerical checks for phi_t = lap(phi^2) - h phi^theta."""
from .symexpr import Expr, Verdict, is_zero, parse, to_text

__version__ = "0.1.0"
__all__ = ["Expr", "Verdict", "is_zero", "parse", "to_text", "__version__"]
