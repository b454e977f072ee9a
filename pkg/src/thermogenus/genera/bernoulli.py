"""
Exact Bernoulli numbers.

Used as an independent oracle for the generating-function coefficients:
the series engine builds L, A-hat and Todd by exact division of exponential
series, while the closed forms below go through Bernoulli numbers.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import sympy


@lru_cache(maxsize=None)
def _bernoulli(n: int) -> Fraction:
    value = sympy.Rational(sympy.bernoulli(n))
    return Fraction(int(value.p), int(value.q))


def bernoulli_number(n: int, plus_convention: bool = True) -> Fraction:
    """
    Return B_n as an exact Fraction.

    Args:
        n: index, n >= 0
        plus_convention: B_1 = +1/2 when True, -1/2 otherwise. Every other
            index agrees between the two conventions.
    """
    if n < 0:
        raise ValueError(f"Bernoulli index must be >= 0, got {n}")
    # sympy's B_1 sign depends on its version
    if n == 1:
        return Fraction(1, 2) if plus_convention else Fraction(-1, 2)
    return _bernoulli(n)
