"""
Todd generating function x / (1 - e^{-x}).

Expands in the Chern convention (class variables are elementary symmetric
functions of the unsquared roots). The function is not even: its linear
coefficient is 1/2.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from ..series_core import PowerSeries, cancel_common_x, exp_linear
from .base import GeneratingFunction, GenusKind, RootConvention
from .bernoulli import bernoulli_number


class ToddGenus(GeneratingFunction):
    """Todd class, x/(1 - e^{-x})."""

    kind = GenusKind.TODD
    convention = RootConvention.CHERN
    description = "Todd class x/(1 - e^{-x})"

    def build_series(self, order: int) -> PowerSeries:
        if order < 0:
            raise ValueError(f"order must be non-negative, got {order}")
        denominator = 1 - exp_linear(-1, order + 1)
        return cancel_common_x(PowerSeries.variable(order + 1), denominator)

    def closed_form_coefficient(self, k: int) -> Fraction:
        # x e^x / (e^x - 1) = sum B_k^+ x^k / k!
        return bernoulli_number(k, plus_convention=True) / factorial(k)
