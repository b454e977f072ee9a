#!/usr/bin/env python3

"""
    Thermodynamics of the harmonic oscillator in the dimensionless variable
    x = beta * hbar * omega.

    Closed forms (partition function Z, internal energy U, beta*U), truncated
    and degeneracy-weighted traces, the trace-class tail bound, and the exact
    series of beta*U and x*Z that coincide with the L and A-hat generating
    functions.
"""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .errors import EmptySpectrum, NonPositiveArgument, OutOfDomain
from .series_core import DEFAULT_ORDER, PowerSeries, cancel_common_x, exp_linear

lgr = logging.getLogger(__name__)

SERIES_BRANCH_THRESHOLD = 1e-3


def require_positive(name: str, value: float) -> float:
    value = float(value)
    if not value > 0 or math.isinf(value):
        raise NonPositiveArgument(f"{name} must be a positive finite number, got {value}")
    return value


def require_level(name: str, value: int) -> int:
    if int(value) != value or value < 0:
        raise NonPositiveArgument(f"{name} must be a non-negative integer, got {value}")
    return int(value)


@dataclass(frozen=True)
class OscillatorSpec:
    """Oscillator quantum hbar*omega; the dimensionless mode is hbar_omega = 1."""

    hbar_omega: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "hbar_omega", require_positive("hbar_omega", self.hbar_omega))

    def x(self, beta: float) -> float:
        return require_positive("beta", beta) * self.hbar_omega


@dataclass(frozen=True)
class ThermoPoint:
    beta: float
    x: float
    z: float
    u: float
    beta_u: float

    def __post_init__(self):
        require_positive("x", self.x)
        # Z underflows to 0.0 beyond x ~ 1490
        if not (math.isfinite(self.z) and self.z >= 0):
            raise OutOfDomain(f"partition value must be finite and non-negative, got {self.z}")


@dataclass(frozen=True)
class Spectrum:
    """
    Ordered energy levels with integer degeneracies.

    `canonical` marks the single oscillator ladder E_n = (n + 1/2) hbar_omega,
    the only spectrum with a closed-form unbounded trace.
    """

    levels: Tuple[Tuple[float, int], ...]
    canonical: bool = False
    hbar_omega: Optional[float] = None

    def __post_init__(self):
        levels = tuple((float(e), int(c)) for e, c in self.levels)
        if not levels:
            raise EmptySpectrum("a spectrum needs at least one level")
        for (e0, _), (e1, _) in zip(levels, levels[1:]):
            if not e1 > e0:
                raise ValueError(f"energies must be strictly increasing, got {e0} then {e1}")
        for e, c in levels:
            if c < 1:
                raise ValueError(f"degeneracy of level {e} must be >= 1, got {c}")
        if self.canonical:
            if self.hbar_omega is None:
                raise ValueError("a canonical ladder needs hbar_omega")
            if any(c != 1 for _, c in levels):
                raise ValueError("the canonical ladder is non-degenerate")
        object.__setattr__(self, "levels", levels)

    def __len__(self):
        return len(self.levels)

    @property
    def energies(self) -> np.ndarray:
        return np.array([e for e, _ in self.levels])

    @property
    def degeneracies(self) -> np.ndarray:
        return np.array([c for _, c in self.levels], dtype=np.int64)

    def truncated(self, n_max: int) -> "Spectrum":
        """Levels 0..n_max; a canonical ladder is extended as needed."""
        n_max = require_level("N", n_max)
        if self.canonical:
            return Spectrum.oscillator_ladder(self.hbar_omega, n_max + 1)
        if n_max + 1 > len(self.levels):
            lgr.debug(f"requested {n_max + 1} levels, spectrum only has {len(self.levels)}")
        return Spectrum(self.levels[: n_max + 1])

    @classmethod
    def oscillator_ladder(cls, hbar_omega: float = 1.0, n_levels: int = 1) -> "Spectrum":
        """E_n = (n + 1/2) hbar_omega for n = 0..n_levels-1, degeneracy 1."""
        hbar_omega = require_positive("hbar_omega", hbar_omega)
        if n_levels < 1:
            raise EmptySpectrum(f"n_levels must be >= 1, got {n_levels}")
        levels = tuple(((n + 0.5) * hbar_omega, 1) for n in range(n_levels))
        return cls(levels, canonical=True, hbar_omega=hbar_omega)

    @classmethod
    def isotropic(cls, hbar_omega: float = 1.0, n_shells: int = 1, dimension: int = 3) -> "Spectrum":
        """
        d-dimensional isotropic oscillator: E_n = (n + d/2) hbar_omega with
        degeneracy C(n + d - 1, d - 1), shells n = 0..n_shells-1.
        """
        if dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {dimension}")
        if dimension == 1:
            return cls.oscillator_ladder(hbar_omega, n_shells)
        hbar_omega = require_positive("hbar_omega", hbar_omega)
        if n_shells < 1:
            raise EmptySpectrum(f"n_shells must be >= 1, got {n_shells}")
        levels = tuple(
            ((n + dimension / 2) * hbar_omega, math.comb(n + dimension - 1, dimension - 1)) for n in range(n_shells)
        )
        return cls(levels)

    @classmethod
    def from_json(cls, data: dict) -> "Spectrum":
        """
        {"levels": [[0.5, 1], [1.5, 1], ...]}, optionally with "canonical": true
        and "hbar_omega" to mark the oscillator ladder. A canonical ladder
        without hbar_omega takes it from the ground level.
        """
        levels = tuple((float(e), int(c)) for e, c in data.get("levels", []))
        if not data.get("canonical", False):
            return cls(levels)
        if not levels:
            raise EmptySpectrum("a canonical ladder needs at least one level")
        hbar_omega = data.get("hbar_omega")
        hbar_omega = 2.0 * levels[0][0] if hbar_omega is None else float(hbar_omega)
        ladder = cls.oscillator_ladder(hbar_omega, len(levels))
        if not np.allclose(ladder.energies, [e for e, _ in levels], rtol=1e-12, atol=0.0):
            raise ValueError(f"levels do not form the ladder (n + 1/2) * {hbar_omega}")
        if any(c != 1 for _, c in levels):
            raise ValueError("the canonical ladder is non-degenerate")
        return ladder

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Spectrum":
        path = Path(path)
        with path.open("r") as f:
            data = json.load(f)
        lgr.debug(f"Loaded spectrum with {len(data.get('levels', []))} levels from {path}")
        return cls.from_json(data)

    def to_json(self) -> dict:
        out = {"levels": [[e, c] for e, c in self.levels]}
        if self.canonical:
            out.update(canonical=True, hbar_omega=self.hbar_omega)
        return out


# -- closed forms -----------------------------------------------------------

def partition_closed(x: float, threshold: float = SERIES_BRANCH_THRESHOLD) -> float:
    """Z = 1 / (2 sinh(x/2)), through its Laurent series below threshold."""
    x = require_positive("x", x)
    if x < threshold:
        x2 = x * x
        return 1.0 / x - x / 24.0 + 7.0 * x * x2 / 5760.0 - 31.0 * x * x2 * x2 / 967680.0
    return math.exp(-0.5 * x) / -math.expm1(-x)


def beta_u(x: float, threshold: float = SERIES_BRANCH_THRESHOLD) -> float:
    """Dimensionless internal energy beta*U = (x/2) / tanh(x/2)."""
    x = require_positive("x", x)
    if x < threshold:
        x2 = x * x
        return 1.0 + x2 / 12.0 - x2 * x2 / 720.0
    half = 0.5 * x
    return half / math.tanh(half)


def internal_energy(beta: float, spec: Optional[OscillatorSpec] = None) -> float:
    """U = hbar_omega/2 + hbar_omega/(e^{beta hbar_omega} - 1) = beta_u(x)/beta."""
    spec = spec or OscillatorSpec()
    beta = require_positive("beta", beta)
    return beta_u(spec.x(beta)) / beta


def partition_truncated(x: float, N: int) -> float:
    """Z_N = sum_{n=0}^{N} e^{-x(n + 1/2)}."""
    x = require_positive("x", x)
    N = require_level("N", N)
    return math.fsum(math.exp(-x * (n + 0.5)) for n in range(N + 1))


def tail_bound(x: float, N: int) -> float:
    """Z - Z_N = e^{-x(N + 3/2)} / (1 - e^{-x})."""
    x = require_positive("x", x)
    N = require_level("N", N)
    return math.exp(-x * (N + 1.5)) / -math.expm1(-x)


def levels_for_tolerance(x: float, tol: float) -> int:
    """Smallest N with tail_bound(x, N) < tol."""
    x = require_positive("x", x)
    tol = require_positive("tol", tol)
    guess = -math.log(tol * -math.expm1(-x)) / x - 1.5
    N = max(0, math.ceil(guess))
    while tail_bound(x, N) >= tol:
        N += 1
    while N > 0 and tail_bound(x, N - 1) < tol:
        N -= 1
    return N


def partition_degenerate(spectrum: Union[Spectrum, Sequence[Tuple[float, int]]], beta: float) -> float:
    """Z' = sum_i C_i e^{-beta E_i} over a finite spectrum."""
    if not isinstance(spectrum, Spectrum):
        spectrum = Spectrum(tuple(spectrum))
    beta = require_positive("beta", beta)
    return math.fsum(c * math.exp(-beta * e) for e, c in spectrum.levels)


# -- exact series -----------------------------------------------------------

def beta_u_series(order: int = DEFAULT_ORDER) -> PowerSeries:
    """Exact series of beta*U = x/(e^x - 1) + x/2."""
    if order < 0:
        raise ValueError(f"order must be non-negative, got {order}")
    bose = cancel_common_x(PowerSeries.variable(order + 1), exp_linear(1, order + 1) - 1)
    return bose + PowerSeries.variable(order) / 2


def x_partition_series(order: int = DEFAULT_ORDER) -> PowerSeries:
    """Exact series of x*Z = x / (e^{x/2} - e^{-x/2})."""
    if order < 0:
        raise ValueError(f"order must be non-negative, got {order}")
    denominator = exp_linear(Fraction(1, 2), order + 1) - exp_linear(Fraction(-1, 2), order + 1)
    return cancel_common_x(PowerSeries.variable(order + 1), denominator)


# -- points and sweeps ------------------------------------------------------

def thermo_point(
    beta: float, spec: Optional[OscillatorSpec] = None, threshold: float = SERIES_BRANCH_THRESHOLD
) -> ThermoPoint:
    spec = spec or OscillatorSpec()
    beta = require_positive("beta", beta)
    x = spec.x(beta)
    bu = beta_u(x, threshold)
    return ThermoPoint(beta=beta, x=x, z=partition_closed(x, threshold), u=bu / beta, beta_u=bu)


def thermo_sweep(
    xs: Iterable[float],
    spec: Optional[OscillatorSpec] = None,
    workers: int = 4,
    threshold: float = SERIES_BRANCH_THRESHOLD,
) -> pd.DataFrame:
    """
    Table of x, Z, U, betaU over a grid of x values.

    Rows follow the order of xs regardless of the number of workers.
    """
    spec = spec or OscillatorSpec()
    xs = [require_positive("x", x) for x in xs]

    def _row(x: float):
        point = thermo_point(x / spec.hbar_omega, spec, threshold)
        return {"x": x, "Z": point.z, "U": point.u, "betaU": point.beta_u}

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        rows = list(executor.map(_row, xs))
    lgr.debug(f"thermo sweep: {len(rows)} points with {workers} workers")
    return pd.DataFrame(rows, columns=["x", "Z", "U", "betaU"])
