#!/usr/bin/env python3

"""
    Numerical integration shared by the spatial-density and index integrals.

    Two integrators are exposed:

    - adaptive_quad: QUADPACK adaptive Gauss-Kronrod (scipy.integrate.quad)
      on a finite interval, with an absolute tolerance contract.
    - gauss_hermite: Gauss-Hermite quadrature of a weight-folded integrand
      g(q) standing for g(q) * exp(-q^2), with node doubling until two
      successive results agree.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Tuple

import numpy as np
from scipy import integrate, special

from .errors import NonPositiveArgument, QuadratureNonConvergence

lgr = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadratureResult:
    """Value of a numerical integral with its error estimate and cost."""

    value: float
    error_estimate: float
    evaluations: int

    def __post_init__(self):
        if self.error_estimate < 0:
            raise ValueError(f"error_estimate must be >= 0, got {self.error_estimate}")
        if self.evaluations < 0:
            raise ValueError(f"evaluations must be >= 0, got {self.evaluations}")

    def to_json(self) -> dict:
        return {
            "value": float(self.value),
            "error_estimate": float(self.error_estimate),
            "evaluations": int(self.evaluations),
        }


@lru_cache(maxsize=16)
def hermite_nodes(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gauss-Hermite nodes and weights for the weight exp(-q^2).

    Nodes whose weight underflows to zero are dropped; they contribute
    nothing and the folded integrand may overflow there.
    """
    if nodes < 1:
        raise NonPositiveArgument(f"node count must be positive, got {nodes}")
    q, w = special.roots_hermite(nodes)
    keep = w > 0
    q, w = np.ascontiguousarray(q[keep]), np.ascontiguousarray(w[keep])
    q.setflags(write=False)
    w.setflags(write=False)
    return q, w


def gauss_hermite(
    folded: Callable[[np.ndarray], np.ndarray],
    nodes: int = 200,
    max_nodes: int = 3200,
    agreement: float = 1e-11,
) -> QuadratureResult:
    """
    Integrate g(q) exp(-q^2) over the real line.

    Starts at `nodes` points and doubles until two successive results agree
    within `agreement`. The reported error estimate is that last difference.

    Args:
        folded: vectorized g, the integrand with the Gaussian weight divided out
        nodes: initial node count
        max_nodes: largest node count tried
        agreement: absolute agreement required between successive results

    Raises:
        QuadratureNonConvergence: if max_nodes is reached without agreement
    """
    if agreement <= 0:
        raise NonPositiveArgument(f"agreement must be positive, got {agreement}")
    evaluations = 0

    def _rule(n: int) -> float:
        q, w = hermite_nodes(n)
        with np.errstate(over="ignore", invalid="ignore"):
            terms = w * folded(q)
        if not np.all(np.isfinite(terms)):
            raise QuadratureNonConvergence(f"non-finite integrand on the {n}-node Gauss-Hermite rule")
        return math.fsum(terms)

    previous = _rule(nodes)
    evaluations += nodes
    n = nodes
    while 2 * n <= max_nodes:
        n *= 2
        current = _rule(n)
        evaluations += n
        difference = abs(current - previous)
        lgr.debug(f"Gauss-Hermite {n // 2} -> {n} nodes: difference {difference:.3e}")
        if difference <= agreement:
            return QuadratureResult(current, difference, evaluations)
        previous = current
    raise QuadratureNonConvergence(
        f"Gauss-Hermite results did not agree to {agreement:g} up to {max_nodes} nodes"
    )


def adaptive_quad(
    func: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
    limit: int = 500,
) -> QuadratureResult:
    """
    Adaptive Gauss-Kronrod quadrature of func over [a, b] to absolute tolerance tol.

    Raises:
        QuadratureNonConvergence: if QUADPACK reports a problem or its error
            estimate exceeds tol
    """
    if tol <= 0:
        raise NonPositiveArgument(f"tolerance must be positive, got {tol}")
    out = integrate.quad(func, a, b, epsabs=tol, epsrel=0.0, limit=limit, full_output=1)
    value, abserr, info = out[0], out[1], out[2]
    if len(out) > 3:
        raise QuadratureNonConvergence(f"adaptive quadrature on [{a:g}, {b:g}] failed: {out[3]}")
    if abserr > tol:
        raise QuadratureNonConvergence(f"error estimate {abserr:.3e} exceeds tolerance {tol:.3e}")
    lgr.debug(f"quad on [{a:g}, {b:g}]: value={value!r}, abserr={abserr:.3e}, neval={info['neval']}")
    return QuadratureResult(float(value), float(abserr), int(info["neval"]))
