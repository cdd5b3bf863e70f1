"""Exact computations with complex (1,1) Poisson structures on a coordinate chart."""

from cpoisson.expr import ONE, ZERO, ChartPoint, Expr, PoleError, const, sym, z, zb
from cpoisson.parser import ParseError, parse

__all__ = [
    "ONE",
    "ZERO",
    "ChartPoint",
    "Expr",
    "ParseError",
    "PoleError",
    "const",
    "parse",
    "sym",
    "z",
    "zb",
]
