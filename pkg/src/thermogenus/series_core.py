#!/usr/bin/env python3

"""
    Truncated formal power series over exact rationals.

    A PowerSeries is an immutable tuple of Fraction coefficients c_0..c_order.
    Binary operations truncate to the smaller order of their operands; no
    floating point enters the coefficient arithmetic. The only float-facing
    helper is series_evaluate (Horner evaluation for numeric cross-checks).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence, Union

from .errors import DivisionByNonUnit, NonzeroConstantTerm, NotDivisibleByX

lgr = logging.getLogger(__name__)

Rational = Fraction
Scalar = Union[int, Fraction]

DEFAULT_ORDER = 30


def as_rational(value) -> Fraction:
    """Convert int, Fraction or "p/q" string to Fraction. Floats are rejected."""
    if isinstance(value, bool):
        raise TypeError("booleans are not series coefficients")
    if isinstance(value, float):
        raise TypeError(f"floating point coefficient {value!r} not allowed; pass an int, Fraction or 'p/q' string")
    return Fraction(value)


@dataclass(frozen=True)
class PowerSeries:
    """Truncated power series sum_{k=0}^{order} coeffs[k] x^k."""

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a power series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(as_rational(c) for c in self.coeffs))

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_coefficients(cls, coeffs: Iterable, order: int) -> "PowerSeries":
        """Build a series of the given order, zero-padding or truncating coeffs."""
        if order < 0:
            raise ValueError(f"order must be non-negative, got {order}")
        values = list(coeffs)[: order + 1]
        values += [0] * (order + 1 - len(values))
        return cls(tuple(values))

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "PowerSeries":
        return cls.from_coefficients([], order)

    @classmethod
    def one(cls, order: int = DEFAULT_ORDER) -> "PowerSeries":
        return cls.from_coefficients([1], order)

    @classmethod
    def constant(cls, value: Scalar, order: int = DEFAULT_ORDER) -> "PowerSeries":
        return cls.from_coefficients([value], order)

    @classmethod
    def variable(cls, order: int = DEFAULT_ORDER) -> "PowerSeries":
        """The series x."""
        return cls.from_coefficients([0, 1], order)

    # -- accessors ----------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_unit(self) -> bool:
        """True when the constant term is non-zero (the series is invertible)."""
        return self.coeffs[0] != 0

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise ValueError(f"cannot raise truncation order {self.order} to {order}")
        return PowerSeries(self.coeffs[: order + 1])

    # -- operators ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, PowerSeries):
            return series_add(self, other)
        return series_add(self, PowerSeries.constant(as_rational(other), self.order))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, PowerSeries):
            return series_sub(self, other)
        return series_sub(self, PowerSeries.constant(as_rational(other), self.order))

    def __rsub__(self, other):
        return series_sub(PowerSeries.constant(as_rational(other), self.order), self)

    def __neg__(self):
        return series_neg(self)

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return series_mul(self, other)
        return series_scale(self, as_rational(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PowerSeries):
            return series_div(self, other)
        return series_scale(self, 1 / as_rational(other))

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append(f"({c})*x")
            else:
                terms.append(f"({c})*x^{k}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O(x^{self.order + 1})"


def _shared_order(a: PowerSeries, b: PowerSeries) -> int:
    return min(a.order, b.order)


def series_add(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Coefficient-wise sum truncated at min(a.order, b.order)."""
    n = _shared_order(a, b)
    return PowerSeries(tuple(a.coeffs[k] + b.coeffs[k] for k in range(n + 1)))


def series_neg(a: PowerSeries) -> PowerSeries:
    return PowerSeries(tuple(-c for c in a.coeffs))


def series_sub(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    n = _shared_order(a, b)
    return PowerSeries(tuple(a.coeffs[k] - b.coeffs[k] for k in range(n + 1)))


def series_scale(a: PowerSeries, c: Scalar) -> PowerSeries:
    """Multiply every coefficient by the rational constant c."""
    c = as_rational(c)
    return PowerSeries(tuple(c * v for v in a.coeffs))


def series_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Cauchy product truncated at min(a.order, b.order)."""
    n = _shared_order(a, b)
    out = []
    for k in range(n + 1):
        out.append(sum((a.coeffs[i] * b.coeffs[k - i] for i in range(k + 1)), Fraction(0)))
    return PowerSeries(tuple(out))


def series_div(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """
    Quotient q with q * b == a to the shared order.

    Raises:
        DivisionByNonUnit: if b has zero constant term. Cancel common powers of
            x explicitly with divide_by_x first.
    """
    if not b.is_unit:
        raise DivisionByNonUnit("divisor has zero constant term; use divide_by_x to cancel powers of x first")
    n = _shared_order(a, b)
    b0 = b.coeffs[0]
    q = []
    for k in range(n + 1):
        acc = a.coeffs[k] - sum((b.coeffs[i] * q[k - i] for i in range(1, k + 1)), Fraction(0))
        q.append(acc / b0)
    return PowerSeries(tuple(q))


def series_exp(a: PowerSeries) -> PowerSeries:
    """
    Formal exponential sum_k a^k / k! truncated at a.order.

    Uses the recurrence n e_n = sum_{k=1}^{n} k a_k e_{n-k} from E' = a' E.
    """
    if a.coeffs[0] != 0:
        raise NonzeroConstantTerm("series_exp requires a zero constant term")
    e = [Fraction(1)]
    for n in range(1, a.order + 1):
        acc = sum((k * a.coeffs[k] * e[n - k] for k in range(1, n + 1)), Fraction(0))
        e.append(acc / n)
    return PowerSeries(tuple(e))


def series_scale_arg(a: PowerSeries, c: Scalar) -> PowerSeries:
    """Substitute x -> c x: coefficient k is multiplied by c^k."""
    c = as_rational(c)
    out = []
    power = Fraction(1)
    for coeff in a.coeffs:
        out.append(coeff * power)
        power *= c
    return PowerSeries(tuple(out))


def divide_by_x(a: PowerSeries, k: int = 1) -> PowerSeries:
    """
    Shift coefficients down by k (exact division by x^k).

    The result has order a.order - k, so the loss of known coefficients is
    visible in the type rather than hidden behind zero padding.
    """
    if k < 0:
        raise ValueError(f"shift must be non-negative, got {k}")
    if k > a.order:
        raise NotDivisibleByX(f"cannot divide an order-{a.order} series by x^{k}")
    if any(c != 0 for c in a.coeffs[:k]):
        raise NotDivisibleByX(f"series has a non-zero coefficient below x^{k}")
    return PowerSeries(a.coeffs[k:])


def cancel_common_x(numerator: PowerSeries, denominator: PowerSeries) -> PowerSeries:
    """Divide two series that both vanish at x = 0, cancelling the common x first."""
    return series_div(divide_by_x(numerator, 1), divide_by_x(denominator, 1))


def multiply_by_x(a: PowerSeries, k: int = 1) -> PowerSeries:
    """Multiply by x^k keeping the order (top k coefficients fall off)."""
    if k < 0:
        raise ValueError(f"shift must be non-negative, got {k}")
    return PowerSeries.from_coefficients([0] * k + list(a.coeffs), a.order)


def exp_linear(c: Scalar, order: int = DEFAULT_ORDER) -> PowerSeries:
    """Series of exp(c x): coefficients c^k / k!."""
    c = as_rational(c)
    return PowerSeries(tuple(c ** k / factorial(k) for k in range(order + 1)))


def series_evaluate(a: PowerSeries, x: float) -> float:
    """Horner evaluation of the truncated polynomial at a float point."""
    acc = 0.0
    for coeff in reversed(a.coeffs):
        acc = acc * x + float(coeff)
    return acc


def max_abs_coefficient(a: PowerSeries) -> Fraction:
    """Largest |c_k|; the residual norm reported by the identity checks."""
    return max(abs(c) for c in a.coeffs)


def series_to_json(a: PowerSeries) -> dict:
    """Serialize as {"order": n, "coeffs": ["p/q", ...]}."""
    return {"order": a.order, "coeffs": [str(c) for c in a.coeffs]}


def series_from_json(data: dict) -> PowerSeries:
    coeffs: Sequence = data["coeffs"]
    order = int(data.get("order", len(coeffs) - 1))
    if len(coeffs) != order + 1:
        raise ValueError(f"expected {order + 1} coefficients, got {len(coeffs)}")
    return PowerSeries(tuple(Fraction(str(c)) for c in coeffs))
