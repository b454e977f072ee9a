from __future__ import annotations

import argparse
import importlib.resources as pkg_resources
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, List, Optional

import coloredlogs
import numpy as np
from dotenv import load_dotenv

if TYPE_CHECKING:
    from ..genus import ManifoldClassData

lgr = logging.getLogger(__name__)

COMMANDS = ["series", "genus", "thermo", "density", "verify", "asymmetry", "index-integral"]

DEFAULT_FORMATS = {
    "series": "text",
    "genus": "json",
    "thermo": "csv",
    "density": "csv",
    "verify": "json",
    "asymmetry": "csv",
    "index-integral": "json",
}


def setup_logging(debug=False):
    # logs go to stderr so artifacts on stdout stay clean
    level = logging.DEBUG if debug else logging.INFO
    coloredlogs.install(level=level, stream=sys.stderr)
    logging.getLogger("numexpr").setLevel(logging.WARNING)
    logging.getLogger("urllib3").setLevel(logging.WARNING)


@dataclass
class RunConfig:
    """One validated invocation of the command-line tool."""

    command: str
    suite: Optional[str] = None
    kind: Optional[str] = None
    order: int = 30
    degree: Optional[int] = None
    roots: Optional[int] = None
    manifold: Optional[Path] = None
    manifold_data: Optional["ManifoldClassData"] = None
    x_grid: Optional[np.ndarray] = None
    hbar_omega: float = 1.0
    x: Optional[float] = None
    levels: Optional[int] = None
    grid: Optional[np.ndarray] = None
    beta: float = 1.0
    hbar: float = 1.0
    norm: str = "paper"
    tol: float = 1e-8
    modes: int = 100000
    fmt: str = "json"
    output: Optional[str] = None
    workers: int = 4
    settings: dict = field(default_factory=dict)


def parse_grid(text: str, logspace: bool = False) -> np.ndarray:
    """
    Parse 'a:b:n' into n points from a to b, linearly or log-spaced.

    Raises:
        ValueError: on malformed text, n < 1, or non-positive bounds with logspace
    """
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ValueError(f"grid '{text}' must look like a:b:n")
    a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 1:
        raise ValueError(f"grid '{text}' needs at least one point")
    if n == 1:
        return np.array([a])
    if logspace:
        if a <= 0 or b <= 0:
            raise ValueError(f"log-spaced grid '{text}' needs positive bounds")
        return np.logspace(np.log10(a), np.log10(b), n)
    return np.linspace(a, b, n)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="thermogenus",
        description="thermogenus - exact genus series and verified oscillator thermodynamics",
    )
    p.add_argument("command",
                    help="""
                        Command to run:
                        - series: exact generating series of a genus
                        - genus: multiplicative-sequence polynomials (optionally evaluated on a manifold)
                        - thermo: Z, U, betaU over an x grid
                        - density: Hermite thermal density over a q grid
                        - verify: identity verification suites
                        - asymmetry: f(x), f(-x) decomposition of -dZ/dbeta over an x grid
                        - index-integral: quadrature of the index density over the thermal interval
                    """,
                    choices=COMMANDS,
                    )
    p.add_argument("suite", nargs="?", default=None,
                   help="verification suite for the verify command ('all' runs the identity suites)")

    p.add_argument("--kind", help="genus kind: L, AHAT, TODD, COSH_HALF")
    p.add_argument("--order", type=int, default=None, help="series truncation order (default from config)")
    p.add_argument("--degree", type=int, default=None, help="highest multiplicative-sequence degree")
    p.add_argument("--roots", type=int, default=None, help="formal roots for the symmetric expansion")
    p.add_argument("--manifold", default=None, help="manifold characteristic-number JSON file")

    p.add_argument("--x-grid", default=None, help="x grid as a:b:n")
    p.add_argument("--logspace", action="store_true", help="log-spaced grids")
    p.add_argument("--hbar-omega", type=float, default=1.0, help="oscillator quantum (default: 1)")

    p.add_argument("--x", type=float, default=None, help="dimensionless beta*hbar*omega for density")
    p.add_argument("--levels", type=int, default=None, help="highest level N of the truncated density")
    p.add_argument("--grid", default=None, help="q grid as a:b:n for density")

    p.add_argument("--beta", type=float, default=1.0, help="inverse temperature (default: 1)")
    p.add_argument("--hbar", type=float, default=1.0, help="hbar for the index density (default: 1)")
    p.add_argument("--norm", default="paper", choices=["paper", "canonical"],
                   help="circle Chern character normalization (default: paper)")
    p.add_argument("--tol", type=float, default=1e-8, help="absolute quadrature tolerance (default: 1e-8)")
    p.add_argument("--modes", type=int, default=None, help="Matsubara modes (default from config)")

    p.add_argument("--format", dest="fmt", default=None, choices=["json", "csv", "text"],
                   help="artifact format (default depends on the command)")
    p.add_argument("--output", default=None, help="output file (default: standard output)")
    p.add_argument("--config", default=None, help="JSON file merged over the packaged configuration")
    p.add_argument("--workers", type=int, default=None, help="worker threads for sweeps (default from config)")
    p.add_argument("--debug", action="store_true", help="debug logging")
    return p


def load_config(config_path=None):
    """
    Load the packaged configuration and merge a user file over it.

    Args:
        config_path (str | Path, optional): Path to a JSON file with overrides.

    Returns:
        dict: Parsed settings; the packaged defaults when the user file is missing or invalid.
    """
    default_path = pkg_resources.files("thermogenus").joinpath("config/thermogenus_config.json")
    with default_path.open("r") as f:
        settings = json.load(f)

    if config_path is None:
        return settings

    config_path = Path(config_path)
    try:
        with config_path.open("r") as f:
            overrides = json.load(f)
        lgr.info(f"Loaded configuration from {config_path}")
    except FileNotFoundError:
        lgr.error(f"Configuration file '{config_path}' not found.")
        return settings
    except json.JSONDecodeError:
        lgr.error(f"Invalid JSON format in '{config_path}'.")
        return settings

    unknown = sorted(set(overrides) - set(settings))
    if unknown:
        lgr.warning(f"Ignoring unknown configuration keys: {unknown}")
    settings.update({k: v for k, v in overrides.items() if k in settings})
    return settings


def parse_args(argv: Optional[List[str]] = None) -> RunConfig:
    """Parse and validate the command line; invalid flags exit with status 2."""
    from ..errors import InvalidManifoldData, UnknownGenusKind
    from ..genera import GenusKind
    from ..genus import ManifoldClassData
    from ..verify import list_available_suites

    p = build_parser()
    args = p.parse_args(argv)
    settings = load_config(args.config)

    def _positive(name, value):
        if value is None or not value > 0:
            p.error(f"{name} must be positive, got {value}")
        return value

    def _grid(name, text, positive):
        if text is None:
            p.error(f"{args.command} requires {name}")
        try:
            grid = parse_grid(text, args.logspace)
        except ValueError as e:
            p.error(str(e))
        if positive and np.any(grid <= 0):
            p.error(f"{name} values must be positive")
        return grid

    config = RunConfig(command=args.command, settings=settings, output=args.output)
    config.fmt = args.fmt or DEFAULT_FORMATS[args.command]
    config.order = settings["series_order"] if args.order is None else args.order
    if config.order < 0:
        p.error(f"--order must be non-negative, got {config.order}")
    config.workers = settings["workers"] if args.workers is None else args.workers
    if config.workers < 1:
        p.error(f"--workers must be at least 1, got {config.workers}")
    config.modes = settings["matsubara_modes"] if args.modes is None else args.modes
    if config.modes < 0:
        p.error(f"--modes must be non-negative, got {config.modes}")

    if args.command in ("series", "genus"):
        if args.kind is None:
            p.error(f"{args.command} requires --kind")
        try:
            config.kind = GenusKind.parse(args.kind).value
        except UnknownGenusKind as e:
            p.error(str(e))
    if args.command == "genus":
        if args.degree is None and args.manifold is None:
            p.error("genus requires --degree or --manifold")
        if args.degree is not None and args.degree < 0:
            p.error(f"--degree must be non-negative, got {args.degree}")
        if args.roots is not None and args.roots < 0:
            p.error(f"--roots must be non-negative, got {args.roots}")
        if args.manifold is not None:
            if not Path(args.manifold).is_file():
                p.error(f"manifold file '{args.manifold}' not found")
            try:
                config.manifold_data = ManifoldClassData.load(args.manifold)
            except InvalidManifoldData as e:
                p.error(f"invalid manifold file: {e}")
        config.degree, config.roots = args.degree, args.roots
        config.manifold = None if args.manifold is None else Path(args.manifold)
    elif args.command == "thermo":
        config.x_grid = _grid("--x-grid", args.x_grid, positive=True)
        config.hbar_omega = _positive("--hbar-omega", args.hbar_omega)
    elif args.command == "density":
        config.x = _positive("--x", args.x)
        if args.levels is None or args.levels < 0:
            p.error(f"density requires a non-negative --levels, got {args.levels}")
        config.levels = args.levels
        config.grid = _grid("--grid", args.grid, positive=False)
    elif args.command == "verify":
        if args.suite is None:
            p.error(f"verify requires a suite: {list_available_suites()}")
        if args.suite not in list_available_suites():
            p.error(f"unknown suite '{args.suite}'; available: {list_available_suites()}")
        config.suite = args.suite
        if args.x_grid is not None:
            config.x_grid = _grid("--x-grid", args.x_grid, positive=True)
        config.beta = _positive("--beta", args.beta)
    elif args.command == "asymmetry":
        config.x_grid = _grid("--x-grid", args.x_grid, positive=True)
        config.beta = _positive("--beta", args.beta)
    elif args.command == "index-integral":
        config.beta = _positive("--beta", args.beta)
        config.hbar = _positive("--hbar", args.hbar)
        config.tol = _positive("--tol", args.tol)
        config.norm = args.norm
    if args.suite is not None and args.command != "verify":
        p.error(f"unexpected argument '{args.suite}' for {args.command}")
    return config


# -- command handlers: each returns (artifact text, exit code) ---------------

def _table_text(table, fmt):
    from ..serialization import dataframe_to_csv, to_json_text

    if fmt == "csv":
        return dataframe_to_csv(table)
    return to_json_text(table.to_dict(orient="records"))


def _series_command(config: RunConfig):
    import pandas as pd

    from ..genus import generating_series
    from ..serialization import dataframe_to_csv, to_json_text
    from ..series_core import series_to_json

    series = generating_series(config.kind, config.order)
    if config.fmt == "json":
        return to_json_text({"kind": config.kind, **series_to_json(series)}), 0
    if config.fmt == "csv":
        table = pd.DataFrame({"k": range(series.order + 1), "coeff": list(series.coeffs)})
        return dataframe_to_csv(table), 0
    return "".join(f"{c}\n" for c in series.coeffs), 0


def _genus_command(config: RunConfig):
    import pandas as pd

    from ..genera import RootConvention, get_genus
    from ..genus import ManifoldClassData, genus_value, monomial_key, multiplicative_sequence, signature_index
    from ..serialization import dataframe_to_csv, to_json_text

    genus = get_genus(config.kind)
    data = config.manifold_data
    if data is None and config.manifold is not None:
        data = ManifoldClassData.load(config.manifold)
    degree = config.degree
    if degree is None:
        degree = data.l if genus.convention is RootConvention.PONTRYAGIN else 2 * data.l
    polys = multiplicative_sequence(genus.kind, degree, config.roots)

    if config.fmt == "csv":
        rows = [
            {"degree": p.degree, "monomial": monomial_key(p.symbol, m), "coefficient": str(c)}
            for p in polys
            for m, c in p.terms.items()
        ]
        return dataframe_to_csv(pd.DataFrame(rows, columns=["degree", "monomial", "coefficient"])), 0

    payload = {
        "kind": genus.kind.value,
        "convention": genus.convention.name,
        "polynomials": [p.to_json() for p in polys],
    }
    if data is not None:
        payload["manifold"] = {"name": data.name, "l": data.l, "genus": genus_value(genus.kind, data, config.roots)}
        if genus.kind.value == "L":
            payload["manifold"]["signature_index"] = signature_index(data)
    return to_json_text(payload), 0


def _thermo_command(config: RunConfig):
    from ..thermo import OscillatorSpec, thermo_sweep

    table = thermo_sweep(
        config.x_grid,
        OscillatorSpec(config.hbar_omega),
        workers=config.workers,
        threshold=config.settings["series_branch_threshold"],
    )
    return _table_text(table, config.fmt), 0


def _density_command(config: RunConfig):
    from ..trace_geom import density_grid, integrate_density

    settings = config.settings
    table = density_grid(config.x, config.levels, config.grid, workers=config.workers)
    total = integrate_density(
        config.x,
        config.levels,
        nodes=settings["gauss_hermite_nodes"],
        max_nodes=settings["gauss_hermite_max_nodes"],
        agreement=settings["gauss_hermite_agreement"],
    )
    lgr.info(f"integral of the density over q: {total.value!r} (error {total.error_estimate:.2e})")
    return _table_text(table, config.fmt), 0


def _verify_command(config: RunConfig):
    from ..serialization import to_json_text
    from ..verify import VerifyParams, run_suites

    settings = config.settings
    params = VerifyParams(
        order=config.order,
        beta=config.beta,
        modes=config.modes,
        workers=config.workers,
        gh_nodes=settings["gauss_hermite_nodes"],
        gh_max_nodes=settings["gauss_hermite_max_nodes"],
        gh_agreement=settings["gauss_hermite_agreement"],
    )
    if config.x_grid is not None:
        params.xs = config.x_grid
    reports = run_suites(config.suite, params)
    passed = all(r.passed for r in reports)
    payload = {"suite": config.suite, "passed": passed, "reports": [r.to_json() for r in reports]}
    return to_json_text(payload), 0 if passed else 1


def _asymmetry_command(config: RunConfig):
    from ..asymmetry import asymmetry_sweep

    return _table_text(asymmetry_sweep(config.x_grid, beta=config.beta, workers=config.workers), config.fmt), 0


def _index_integral_command(config: RunConfig):
    from ..asymmetry import IndexDensitySpec, index_integral
    from ..serialization import to_json_text

    spec = IndexDensitySpec(beta=config.beta, hbar=config.hbar, normalization=config.norm)
    result = index_integral(
        spec,
        tol=config.tol,
        epsilon=config.settings["quadrature_epsilon"],
        limit=config.settings["quadrature_limit"],
    )
    payload = {
        **result.to_json(),
        "normalization": spec.normalization.value,
        "ch_over_partition_function": spec.normalization.factor,
        "beta": spec.beta,
        "hbar": spec.hbar,
    }
    return to_json_text(payload), 0


HANDLERS = {
    "series": _series_command,
    "genus": _genus_command,
    "thermo": _thermo_command,
    "density": _density_command,
    "verify": _verify_command,
    "asymmetry": _asymmetry_command,
    "index-integral": _index_integral_command,
}


def run(config: RunConfig, stream=None) -> int:
    """
    Execute one command and emit its artifact.

    Returns:
        0 on success, 1 on numerical non-convergence, a failed verification
        suite, or any other library error
    """
    from ..errors import QuadratureNonConvergence, ThermoGenusError
    from ..serialization import resolve_output_path, write_artifact

    try:
        text, code = HANDLERS[config.command](config)
    except QuadratureNonConvergence as e:
        lgr.error(f"Quadrature did not converge: {e}")
        return 1
    except ThermoGenusError as e:
        lgr.error(f"{config.command} failed: {type(e).__name__}: {e}")
        return 1

    path = resolve_output_path(config.output, config.settings.get("output_dir"))
    write_artifact(text, path, stream or sys.stdout)
    return code


def main(argv: Optional[List[str]] = None) -> None:
    load_dotenv()
    argv = sys.argv[1:] if argv is None else argv

    debug = bool(os.environ.get("DEBUG", False)) or "--debug" in argv
    setup_logging(debug=debug)

    config = parse_args(argv)
    lgr.debug(f"Running {config.command} with workers={config.workers}")
    sys.exit(run(config))
