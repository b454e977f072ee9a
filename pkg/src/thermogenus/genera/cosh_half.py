"""
Auxiliary factor cosh(x/2).

Not a genus in its own right: it is the factor relating the two Hirzebruch
genera, L(x) = A-hat(x) * cosh(x/2). It is even, so it can still be expanded
in the Pontryagin convention.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from ..series_core import PowerSeries
from .base import GeneratingFunction, GenusKind, RootConvention, half_exponentials


class CoshHalf(GeneratingFunction):
    """cosh(x/2) = (e^{x/2} + e^{-x/2}) / 2."""

    kind = GenusKind.COSH_HALF
    convention = RootConvention.PONTRYAGIN
    description = "auxiliary factor cosh(x/2)"

    def build_series(self, order: int) -> PowerSeries:
        if order < 0:
            raise ValueError(f"order must be non-negative, got {order}")
        e_plus, e_minus = half_exponentials(order)
        return (e_plus + e_minus) * Fraction(1, 2)

    def closed_form_coefficient(self, k: int) -> Fraction:
        if k % 2:
            return Fraction(0)
        return Fraction(1, 2 ** k * factorial(k))
