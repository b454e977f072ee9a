"""
Generating Function Interface

This module defines the abstract base class every characteristic-class
generating function implements. A generating function knows:

- how to build its exact one-variable power series Q(x),
- which root convention its multiplicative sequence uses (Pontryagin: the
  class variables are elementary symmetric functions of x_i^2; Chern: of x_i),
- a closed form for its coefficients, used as an independent oracle.

USAGE:
    from thermogenus.genera.base import GeneratingFunction, RootConvention

    class MyGenus(GeneratingFunction):
        kind = GenusKind.L
        convention = RootConvention.PONTRYAGIN

        def build_series(self, order):
            ...

        def closed_form_coefficient(self, k):
            ...
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from enum import Enum
from fractions import Fraction

from ..errors import UnknownGenusKind
from ..series_core import (
    PowerSeries,
    exp_linear,
    series_scale_arg,
)

lgr = logging.getLogger(__name__)

HALF = Fraction(1, 2)


class GenusKind(Enum):
    L = "L"
    A_HAT = "A_HAT"
    TODD = "TODD"
    COSH_HALF = "COSH_HALF"

    @classmethod
    def parse(cls, text: str) -> "GenusKind":
        """Accept the CLI spellings L, AHAT, A_HAT, A-HAT, TODD, TD, COSH_HALF, COSH."""
        key = str(text).strip().upper().replace("-", "_")
        aliases = {"AHAT": "A_HAT", "TD": "TODD", "COSH": "COSH_HALF"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            valid = [k.value for k in cls]
            raise UnknownGenusKind(f"Unknown genus kind: '{text}'. Available kinds: {valid}") from None


class RootConvention(Enum):
    """Which symmetric functions of the formal roots become the class variables."""

    PONTRYAGIN = "p"  # elementary symmetric in x_i^2
    CHERN = "c"  # elementary symmetric in x_i

    @property
    def symbol(self) -> str:
        return self.value


def half_exponentials(order: int):
    """Return the exact series of exp(x/2) and exp(-x/2)."""
    return exp_linear(HALF, order), exp_linear(-HALF, order)


class GeneratingFunction(ABC):
    """
    Abstract base class for the one-variable generating functions Q(x) behind
    multiplicative sequences.

    Implementations are stateless; the registry hands out fresh instances.
    """

    kind: GenusKind
    convention: RootConvention
    description: str = ""
    # argument scaling applied before expanding into class polynomials
    root_scale: Fraction = Fraction(1)

    def __init__(self):
        self.logger = logging.getLogger(f"{__name__}.{self.__class__.__name__}")

    @abstractmethod
    def build_series(self, order: int) -> PowerSeries:
        """
        Exact series of Q(x) through x^order.

        Args:
            order: truncation degree, >= 0

        Returns:
            PowerSeries of the given order with unit constant term
        """
        pass

    @abstractmethod
    def closed_form_coefficient(self, k: int) -> Fraction:
        """Coefficient of x^k from a closed form independent of build_series."""
        pass

    def class_series(self, max_degree: int) -> PowerSeries:
        """
        Q re-expressed in the class variable t.

        The argument is first scaled by root_scale. For the Pontryagin
        convention Q must be even and t = x^2, so the coefficient of t^j is the
        coefficient of x^(2j). For the Chern convention t = x.
        """
        if self.convention is RootConvention.PONTRYAGIN:
            full = series_scale_arg(self.build_series(2 * max_degree), self.root_scale)
            odd = [c for k, c in enumerate(full.coeffs) if k % 2 == 1 and c != 0]
            if odd:
                raise ValueError(f"{self.kind.value} is not even; cannot use the Pontryagin convention")
            return PowerSeries(full.coeffs[::2])
        return series_scale_arg(self.build_series(max_degree), self.root_scale)

    def __repr__(self):
        return f"<{self.__class__.__name__}(kind={self.kind.value}, convention={self.convention.name})>"
