#!/usr/bin/env python3

"""
    Finite-dimensional trace geometry of the oscillator.

    A truncation to levels 0..N is a point of CP^N in homogeneous coordinates
    z_0..z_N. This module computes its coherent-state symbol, the truncated and
    unbounded Chern trace Tr exp(-beta H), the Hermite-basis thermal density and
    its spatial integral, Euclidean Heisenberg conjugation of finite operators,
    and the Matsubara-product form of the partition function.

    Conventions: mass, frequency and hbar are 1 in the Hermite basis, so the
    dimensionless variable is x = beta.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .errors import LengthMismatch, OutOfDomain, UnboundedNonCanonical, ZeroState
from .quadrature import QuadratureResult, gauss_hermite, hermite_nodes
from .thermo import Spectrum, partition_closed, require_level, require_positive

lgr = logging.getLogger(__name__)

PI_QUARTER = math.pi ** -0.25


@dataclass(frozen=True)
class TruncatedState:
    """Homogeneous coordinates z_0..z_N of a state truncated to N+1 levels."""

    coefficients: np.ndarray

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.coefficients, dtype=complex))
        if z.ndim != 1 or z.size == 0:
            raise ValueError("a truncated state is a non-empty vector of coefficients")
        if not np.any(z != 0):
            raise ZeroState("all coefficients are zero; the projective point is undefined")
        z.setflags(write=False)
        object.__setattr__(self, "coefficients", z)

    def __len__(self):
        return self.coefficients.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def normalized(self) -> "TruncatedState":
        return TruncatedState(self.coefficients / self.norm)


@dataclass(frozen=True)
class FiniteOperator:
    """Operator O on the truncated space with the diagonal reference Hamiltonian diag(energies)."""

    entries: np.ndarray
    energies: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        energies = np.array(self.energies, dtype=float)
        if energies.ndim != 1 or energies.size < 1:
            raise ValueError("a finite operator needs at least one energy")
        if np.any(np.diff(energies) <= 0):
            raise ValueError("energies must be strictly increasing")
        if entries.shape != (energies.size, energies.size):
            raise LengthMismatch(f"entries have shape {entries.shape}, expected {(energies.size, energies.size)}")
        entries.setflags(write=False)
        energies.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "energies", energies)

    @property
    def dimension(self) -> int:
        return self.energies.size

    def trace(self) -> complex:
        return complex(np.trace(self.entries))


class HermiteBasis:
    """
    Normalized oscillator eigenfunctions psi_0..psi_N.

    Evaluated by the normalized three-term recurrence
    psi_{n+1} = q sqrt(2/(n+1)) psi_n - sqrt(n/(n+1)) psi_{n-1},
    which stays finite where raw Hermite polynomials overflow.
    """

    def __init__(self, max_level: int):
        self.max_level = require_level("max_level", max_level)

    def polynomials(self, q) -> np.ndarray:
        """Rows h_n(q) = psi_n(q) exp(q^2/2), shape (N+1, len(q))."""
        return _normalized_recurrence(self.max_level, np.atleast_1d(np.asarray(q, dtype=float)), gaussian=False)

    def functions(self, q) -> np.ndarray:
        """Rows psi_n(q), shape (N+1, len(q))."""
        return _normalized_recurrence(self.max_level, np.atleast_1d(np.asarray(q, dtype=float)), gaussian=True)

    def gram(self, nodes: int = 200) -> np.ndarray:
        """Gauss-Hermite Gram matrix of psi_0..psi_N; the identity up to quadrature error."""
        q, w = hermite_nodes(nodes)
        h = self.polynomials(q)
        return (h * w) @ h.T

    def __repr__(self):
        return f"<HermiteBasis(max_level={self.max_level})>"


def _normalized_recurrence(max_level: int, q: np.ndarray, gaussian: bool) -> np.ndarray:
    out = np.empty((max_level + 1, q.size))
    out[0] = PI_QUARTER * (np.exp(-0.5 * q * q) if gaussian else 1.0)
    if max_level >= 1:
        out[1] = math.sqrt(2.0) * q * out[0]
    for n in range(1, max_level):
        out[n + 1] = q * math.sqrt(2.0 / (n + 1)) * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


# -- symbols and traces -----------------------------------------------------

def coherent_symbol(z: Union[TruncatedState, Sequence[complex]], energies: Sequence[float]) -> float:
    """sum_i E_i |z_i|^2 / ||z||^2, the covariant symbol of H at the point z."""
    if not isinstance(z, TruncatedState):
        z = TruncatedState(np.asarray(z))
    energies = np.asarray(energies, dtype=float)
    if energies.size != len(z):
        raise LengthMismatch(f"{len(z)} coefficients but {energies.size} energies")
    weights = np.abs(z.coefficients) ** 2
    return float(np.dot(weights, energies) / weights.sum())


def chern_trace(spectrum: Spectrum, beta: float, N: Optional[int] = None) -> float:
    """
    Tr exp(-beta H) over levels 0..N, or over the whole spectrum when N is None.

    Raises:
        UnboundedNonCanonical: N is None and the spectrum is not the oscillator ladder
    """
    beta = require_positive("beta", beta)
    if N is None:
        if not spectrum.canonical:
            raise UnboundedNonCanonical("an unbounded trace needs the canonical oscillator ladder")
        return partition_closed(beta * spectrum.hbar_omega)
    levels = spectrum.truncated(N)
    return math.fsum(c * math.exp(-beta * e) for e, c in levels.levels)


def formal_roots(spectrum: Spectrum) -> Tuple[np.ndarray, np.ndarray]:
    """Chern roots x_i = -E_i of the spectral line decomposition, with multiplicities."""
    return -spectrum.energies, spectrum.degeneracies


def chern_character(roots: Sequence[float], beta: float, multiplicities: Optional[Sequence[int]] = None) -> float:
    """ch = sum_i m_i exp(beta x_i)."""
    beta = require_positive("beta", beta)
    roots = np.asarray(roots, dtype=float)
    if multiplicities is None:
        multiplicities = np.ones(roots.size, dtype=np.int64)
    multiplicities = np.asarray(multiplicities)
    if multiplicities.size != roots.size:
        raise LengthMismatch(f"{roots.size} roots but {multiplicities.size} multiplicities")
    return math.fsum(float(m) * math.exp(beta * r) for r, m in zip(roots, multiplicities))


# -- densities --------------------------------------------------------------

def hermite_psi(n: int, q):
    """Normalized eigenfunction psi_n(q); scalar in, scalar out."""
    n = require_level("n", n)
    values = HermiteBasis(n).functions(q)[n]
    return float(values[0]) if np.ndim(q) == 0 else values


def _boltzmann_weights(x: float, N: int) -> np.ndarray:
    return np.exp(-x * (np.arange(N + 1) + 0.5))


def thermal_density(q, x: float, N: int):
    """rho_N(q) = sum_{n<=N} e^{-x(n+1/2)} psi_n(q)^2."""
    x = require_positive("x", x)
    N = require_level("N", N)
    psi = HermiteBasis(N).functions(q)
    rho = _boltzmann_weights(x, N) @ (psi * psi)
    return float(rho[0]) if np.ndim(q) == 0 else rho


def mehler_density(q, x: float):
    """Untruncated density (2 pi sinh x)^{-1/2} exp(-q^2 tanh(x/2)), the N -> infinity limit."""
    x = require_positive("x", x)
    q = np.asarray(q, dtype=float)
    rho = np.exp(-q * q * math.tanh(0.5 * x)) / math.sqrt(2.0 * math.pi * math.sinh(x))
    return float(rho) if rho.ndim == 0 else rho


def integrate_density(
    x: float,
    N: int,
    nodes: int = 200,
    max_nodes: int = 3200,
    agreement: float = 1e-11,
) -> QuadratureResult:
    """
    Integral of thermal_density over the real line; equals partition_truncated(x, N).

    The Gaussian in psi_n^2 is the Gauss-Hermite weight, so only the
    polynomial part sum_n w_n h_n(q)^2 is sampled.
    """
    x = require_positive("x", x)
    N = require_level("N", N)
    basis = HermiteBasis(N)
    weights = _boltzmann_weights(x, N)

    def _folded(q: np.ndarray) -> np.ndarray:
        h = basis.polynomials(q)
        return weights @ (h * h)

    result = gauss_hermite(_folded, nodes=nodes, max_nodes=max_nodes, agreement=agreement)
    lgr.debug(f"integrate_density(x={x}, N={N}) = {result.value!r} ({result.evaluations} evaluations)")
    return result


def hermite_gram(N: int, nodes: int = 200) -> np.ndarray:
    return HermiteBasis(N).gram(nodes)


def density_grid(x: float, N: int, qs: Sequence[float], workers: int = 1) -> pd.DataFrame:
    """Table of (q, rho) for the truncated density; row order follows qs."""
    x = require_positive("x", x)
    N = require_level("N", N)
    qs = np.asarray(qs, dtype=float)
    chunks = np.array_split(qs, max(1, workers)) if qs.size else [qs]
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        parts = list(executor.map(lambda chunk: thermal_density(chunk, x, N), chunks))
    rho = np.concatenate([np.atleast_1d(p) for p in parts]) if qs.size else qs
    return pd.DataFrame({"q": qs, "rho": rho})


# -- Euclidean time and Matsubara modes -------------------------------------

def euclidean_evolve(op: FiniteOperator, tau: float) -> FiniteOperator:
    """e^{tau H} O e^{-tau H} for diagonal H: O_mn -> e^{tau (E_m - E_n)} O_mn."""
    tau = float(tau)
    if tau < 0:
        raise OutOfDomain(f"Euclidean time must be >= 0, got {tau}")
    e = op.energies
    factor = np.exp(tau * (e[:, None] - e[None, :]))
    return FiniteOperator(op.entries * factor, e)


def matsubara_freqs(beta: float, n_max: int) -> np.ndarray:
    """Bosonic frequencies 2 pi n / beta for n = -n_max..n_max."""
    beta = require_positive("beta", beta)
    n_max = require_level("n_max", n_max)
    return 2.0 * math.pi * np.arange(-n_max, n_max + 1) / beta


def matsubara_partition(x: float, n_modes: int, tail_correction: bool = False) -> float:
    """
    Z from the product over Matsubara modes:
    (1/x) prod_{n=1}^{n_modes} (1 + x^2/(4 pi^2 n^2))^{-1}.

    The bare product overshoots Z by the omitted modes, a relative amount of
    about x^2/(4 pi^2 n_modes). tail_correction multiplies by
    exp(-x^2/(4 pi^2 (n_modes + 1/2))), the leading estimate of those modes.
    """
    x = require_positive("x", x)
    n_modes = require_level("n_modes", n_modes)
    a = x * x / (4.0 * math.pi ** 2)
    if n_modes == 0:
        log_product = 0.0
    else:
        n = np.arange(1, n_modes + 1, dtype=float)
        log_product = math.fsum(np.log1p(a / (n * n)))
    if tail_correction:
        log_product += a / (n_modes + 0.5)
    return math.exp(-log_product) / x


def l2_truncation_residual(target: Union[TruncatedState, Sequence[complex]], N: int) -> float:
    """||psi - sum_{i<=N} c_i psi_i|| for the normalized coefficient vector of target."""
    if not isinstance(target, TruncatedState):
        target = TruncatedState(np.asarray(target))
    N = require_level("N", N)
    if N > len(target):
        raise OutOfDomain(f"N={N} exceeds the basis size {len(target)}")
    c = target.normalized().coefficients
    tail = np.abs(c[N + 1:]) ** 2
    return math.sqrt(math.fsum(tail)) if tail.size else 0.0
