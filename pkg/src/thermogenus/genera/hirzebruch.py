"""
Hirzebruch L and A-hat generating functions.

Both are even functions of x and expand in the Pontryagin convention:

    L(x)     = (x/2) / tanh(x/2) = (x/2) (e^{x/2} + e^{-x/2}) / (e^{x/2} - e^{-x/2})
    A-hat(x) = (x/2) / sinh(x/2) = x / (e^{x/2} - e^{-x/2})

Series are assembled from exact exponential series; the common factor x of
numerator and denominator is cancelled explicitly before division.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from ..series_core import PowerSeries, cancel_common_x, multiply_by_x
from .base import GeneratingFunction, GenusKind, RootConvention, half_exponentials
from .bernoulli import bernoulli_number


class LGenus(GeneratingFunction):
    """Hirzebruch L-genus, (x/2)/tanh(x/2)."""

    kind = GenusKind.L
    convention = RootConvention.PONTRYAGIN
    description = "Hirzebruch L-genus (x/2)/tanh(x/2)"
    # class polynomials use Hirzebruch's x/tanh(x), so L_1 = p1/3 and L_l[M] is the signature
    root_scale = Fraction(2)

    def build_series(self, order: int) -> PowerSeries:
        if order < 0:
            raise ValueError(f"order must be non-negative, got {order}")
        e_plus, e_minus = half_exponentials(order + 1)
        numerator = multiply_by_x(e_plus + e_minus) * Fraction(1, 2)
        denominator = e_plus - e_minus
        return cancel_common_x(numerator, denominator)

    def closed_form_coefficient(self, k: int) -> Fraction:
        if k % 2:
            return Fraction(0)
        return bernoulli_number(k) / factorial(k)


class AHatGenus(GeneratingFunction):
    """A-hat genus, (x/2)/sinh(x/2)."""

    kind = GenusKind.A_HAT
    convention = RootConvention.PONTRYAGIN
    description = "A-hat genus (x/2)/sinh(x/2)"

    def build_series(self, order: int) -> PowerSeries:
        if order < 0:
            raise ValueError(f"order must be non-negative, got {order}")
        e_plus, e_minus = half_exponentials(order + 1)
        return cancel_common_x(PowerSeries.variable(order + 1), e_plus - e_minus)

    def closed_form_coefficient(self, k: int) -> Fraction:
        if k % 2:
            return Fraction(0)
        return -(1 - Fraction(2) ** (1 - k)) * bernoulli_number(k) / factorial(k)
