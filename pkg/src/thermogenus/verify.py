"""
Identity Verification Suites

Each suite checks one identity between the thermodynamic and the
characteristic-class sides and returns a SuiteReport with its residuals and
the tolerances they were held to. Exact series suites compare rational
coefficients and pass only on a zero residual.

Suites are looked up by name in SUITE_REGISTRY; "all" runs IDENTITY_SUITES.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List

import numpy as np

from .asymmetry import asymmetry_sweep
from .errors import ThermoGenusError
from .genera import GenusKind, get_genus
from .genus import ClassPolynomial, generating_series, multiplicative_sequence, verify_LA_identity
from .series_core import DEFAULT_ORDER, PowerSeries, max_abs_coefficient, series_evaluate
from .thermo import Spectrum, beta_u, beta_u_series, partition_closed, partition_truncated, x_partition_series
from .trace_geom import chern_trace, integrate_density, matsubara_partition

lgr = logging.getLogger(__name__)


def default_x_grid() -> np.ndarray:
    return np.logspace(-2, math.log10(20.0), 200)


@dataclass
class VerifyParams:
    order: int = DEFAULT_ORDER
    xs: np.ndarray = field(default_factory=default_x_grid)
    beta: float = 1.0
    modes: int = 100000
    max_level: int = 20
    workers: int = 4
    gh_nodes: int = 200
    gh_max_nodes: int = 3200
    gh_agreement: float = 1e-11


@dataclass
class SuiteReport:
    suite: str
    passed: bool
    residuals: Dict[str, object]
    tolerances: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        self.passed = bool(self.passed)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "passed": bool(self.passed),
            "residuals": {k: _plain(v) for k, v in self.residuals.items()},
            "tolerances": {k: _plain(v) for k, v in self.tolerances.items()},
        }


def _plain(value):
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer, int)) and not isinstance(value, bool):
        return int(value)
    return value


def _exact_report(name: str, residual: PowerSeries) -> SuiteReport:
    norm = max_abs_coefficient(residual)
    return SuiteReport(name, norm == 0, {"max_abs_coefficient": norm, "order": residual.order}, {"exact": True})


# -- series identities ------------------------------------------------------

def beta_u_l_series(params: VerifyParams) -> SuiteReport:
    """beta*U = x/(e^x - 1) + x/2 has the L generating series."""
    return _exact_report("beta-u-l-series", beta_u_series(params.order) - generating_series(GenusKind.L, params.order))


def partition_ahat_series(params: VerifyParams) -> SuiteReport:
    """x*Z built from exponentials has the A-hat generating series."""
    residual = x_partition_series(params.order) - generating_series(GenusKind.A_HAT, params.order)
    return _exact_report("partition-ahat-series", residual)


def l_ahat_cosh(params: VerifyParams) -> SuiteReport:
    """L(x) = A-hat(x) cosh(x/2)."""
    return _exact_report("l-ahat-cosh", verify_LA_identity(params.order))


# -- numerical identities ---------------------------------------------------

def asymmetry_decomposition(params: VerifyParams) -> SuiteReport:
    """f(x) - f(-x) against a finite difference of Z in beta and against U*Z."""
    tol_fd, tol_uz = 1e-6, 1e-12
    table = asymmetry_sweep(params.xs, beta=params.beta, workers=params.workers)
    fd_rel = np.abs(table["diff"] - table["fd_check"]) / np.abs(table["fd_check"])
    uz = np.array([beta_u(x) * partition_closed(x) / params.beta for x in table["x"]])
    uz_rel = np.abs(table["diff"].to_numpy() - uz) / uz
    residuals = {"max_rel_fd": float(fd_rel.max()), "max_rel_uz": float(uz_rel.max()), "points": len(table)}
    passed = residuals["max_rel_fd"] <= tol_fd and residuals["max_rel_uz"] <= tol_uz
    return SuiteReport("asymmetry-decomposition", passed, residuals, {"max_rel_fd": tol_fd, "max_rel_uz": tol_uz})


def beta_u_numeric(params: VerifyParams) -> SuiteReport:
    """beta_u against Horner evaluation of the L series (x <= 2) and the direct formula."""
    tol_series, tol_direct = 1e-12, 1e-13
    series = generating_series(GenusKind.L, params.order)
    series_rel, direct_abs = 0.0, 0.0
    for x in params.xs:
        value = beta_u(x)
        direct_abs = max(direct_abs, abs(value - (x / 2) / math.tanh(x / 2)))
        if x <= 2.0:
            series_rel = max(series_rel, abs(value - series_evaluate(series, x)) / value)
    residuals = {"max_rel_series": series_rel, "max_abs_direct": direct_abs}
    passed = series_rel <= tol_series and direct_abs <= tol_direct
    tolerances = {"max_rel_series": tol_series, "max_abs_direct": tol_direct}
    return SuiteReport("beta-u-numeric", passed, residuals, tolerances)


def trace_functorial(params: VerifyParams) -> SuiteReport:
    """The Matsubara product and the Chern trace of the ladder give the same Z."""
    ladder = Spectrum.oscillator_ladder(1.0, 1)

    def _ratio(x: float) -> float:
        z = chern_trace(ladder, x)
        deviation = abs(matsubara_partition(x, params.modes) - z) / z
        return deviation / (1.1 * x * x / (4.0 * math.pi ** 2 * params.modes))

    with ThreadPoolExecutor(max_workers=max(1, params.workers)) as executor:
        ratios = list(executor.map(_ratio, params.xs))
    worst = float(max(ratios))
    residuals = {"max_deviation_over_bound": worst, "modes": params.modes, "points": len(ratios)}
    return SuiteReport("trace-functorial", bool(worst <= 1.0), residuals, {"max_deviation_over_bound": 1.0})


def spatial_integration(params: VerifyParams) -> SuiteReport:
    """Integrating the Hermite thermal density over q recovers the truncated trace."""
    tol = 1e-10
    worst = 0.0
    for x in (0.5, 1.0, 2.0, 5.0):
        for n in range(params.max_level + 1):
            result = integrate_density(
                x, n, nodes=params.gh_nodes, max_nodes=params.gh_max_nodes, agreement=params.gh_agreement
            )
            worst = max(worst, abs(result.value - partition_truncated(x, n)))
    residuals = {"max_abs": worst, "max_level": params.max_level}
    return SuiteReport("spatial-integration", worst <= tol, residuals, {"max_abs": tol})


KNOWN_SEQUENCES: Dict[GenusKind, List[Dict[tuple, Fraction]]] = {
    GenusKind.L: [{(1,): Fraction(1, 3)}, {(2,): Fraction(7, 45), (1, 1): Fraction(-1, 45)}],
    GenusKind.A_HAT: [{(1,): Fraction(-1, 24)}, {(1, 1): Fraction(7, 5760), (2,): Fraction(-4, 5760)}],
    GenusKind.TODD: [{(1,): Fraction(1, 2)}, {(1, 1): Fraction(1, 12), (2,): Fraction(1, 12)}],
}


def multiplicative_sequence_suite(params: VerifyParams) -> SuiteReport:
    """Classical low-degree polynomials, stability in the number of roots, Bernoulli closed forms."""
    mismatches: List[str] = []
    for kind, expected in KNOWN_SEQUENCES.items():
        genus = get_genus(kind)
        polys = multiplicative_sequence(kind, len(expected))
        for degree, terms in enumerate(expected, start=1):
            if polys[degree] != ClassPolynomial(degree, genus.convention.symbol, terms):
                mismatches.append(f"{kind.value}_{degree}")
        for degree in range(1, 6):
            narrow = multiplicative_sequence(kind, degree, num_roots=degree)
            wide = multiplicative_sequence(kind, degree, num_roots=degree + 3)
            if narrow != wide:
                mismatches.append(f"{kind.value} unstable at degree {degree}")
        series = genus.build_series(params.order)
        if any(series[k] != genus.closed_form_coefficient(k) for k in range(params.order + 1)):
            mismatches.append(f"{kind.value} series vs Bernoulli closed form")
    return SuiteReport("multiplicative-sequence", not mismatches, {"mismatches": mismatches}, {"mismatches": []})


SUITE_REGISTRY: Dict[str, Callable[[VerifyParams], SuiteReport]] = {
    "beta-u-l-series": beta_u_l_series,
    "partition-ahat-series": partition_ahat_series,
    "l-ahat-cosh": l_ahat_cosh,
    "asymmetry-decomposition": asymmetry_decomposition,
    "trace-functorial": trace_functorial,
    "spatial-integration": spatial_integration,
    "multiplicative-sequence": multiplicative_sequence_suite,
    "beta-u-numeric": beta_u_numeric,
}

IDENTITY_SUITES = ["beta-u-l-series", "partition-ahat-series", "l-ahat-cosh", "asymmetry-decomposition"]


def register_suite(name: str, suite: Callable[[VerifyParams], SuiteReport], replace: bool = False) -> None:
    """
    Register a verification suite.

    Raises:
        ValueError: If name is already registered and replace is False, or is "all"
    """
    if name == "all":
        raise ValueError("'all' is reserved")
    if name in SUITE_REGISTRY and not replace:
        raise ValueError(f"Suite '{name}' is already registered")
    SUITE_REGISTRY[name] = suite
    lgr.info(f"Registered verification suite: {name}")


def list_available_suites() -> List[str]:
    return ["all"] + list(SUITE_REGISTRY)


def run_suites(name: str, params: VerifyParams) -> List[SuiteReport]:
    """
    Run one suite, or every identity suite for "all".

    A suite that raises a library error is reported as failed with the error
    message instead of aborting the remaining suites.

    Raises:
        ValueError: If name is not a registered suite
    """
    if name == "all":
        names = IDENTITY_SUITES
    elif name in SUITE_REGISTRY:
        names = [name]
    else:
        raise ValueError(f"Unknown verification suite: '{name}'. Available suites: {list_available_suites()}")
    reports = []
    for suite in names:
        try:
            report = SUITE_REGISTRY[suite](params)
        except ThermoGenusError as e:
            report = SuiteReport(suite, False, {"error": f"{type(e).__name__}: {e}"})
        if report.passed:
            lgr.info(f"{suite}: passed")
        else:
            lgr.warning(f"{suite}: FAILED, residuals {report.to_json()['residuals']}")
        reports.append(report)
    return reports
