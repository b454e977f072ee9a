"""
Tests for the thermogenus command line

Tests cover:
- Argument validation (exit status 2 from argparse)
- Artifacts of every command on standard output and to files
- Exit status 1 for library errors, quadrature non-convergence and failed suites

Run with: python -m pytest tests/test_cli.py -v
"""

import io
import json
import logging
import math

import numpy as np
import pandas as pd
import pytest

from thermogenus.cli.run import DEFAULT_FORMATS, main, parse_args, parse_grid
from thermogenus.serialization import OUTPUT_DIR_ENV
from thermogenus.thermo import beta_u, partition_closed
from thermogenus.verify import SUITE_REGISTRY, SuiteReport


class TestParseGrid:
    """a:b:n grid parsing"""

    def test_linear(self):
        np.testing.assert_allclose(parse_grid("-8:8:5"), [-8, -4, 0, 4, 8])

    def test_logspace(self):
        np.testing.assert_allclose(parse_grid("0.01:100:5", logspace=True), [0.01, 0.1, 1, 10, 100])

    def test_single_point(self):
        assert list(parse_grid("2:9:1")) == [2.0]

    @pytest.mark.parametrize("text", ["1:2", "a:b:c", "1:2:0"])
    def test_malformed(self, text):
        with pytest.raises(ValueError):
            parse_grid(text)

    def test_logspace_needs_positive_bounds(self):
        with pytest.raises(ValueError):
            parse_grid("0:1:4", logspace=True)


class TestValidation:
    """Invalid invocations exit with status 2"""

    @pytest.mark.parametrize(
        "argv",
        [
            ["series"],
            ["series", "--kind", "elliptic"],
            ["series", "--kind", "L", "--order", "-1"],
            ["genus", "--kind", "L"],
            ["genus", "--kind", "L", "--manifold", "does-not-exist.json"],
            ["thermo"],
            ["thermo", "--x-grid=-1:1:3"],
            ["thermo", "--x-grid", "1:2:3", "--hbar-omega", "0"],
            ["density", "--x", "1", "--grid=-8:8:10"],
            ["density", "--x", "-1", "--levels", "2", "--grid=-8:8:10"],
            ["verify"],
            ["verify", "nonsense"],
            ["thermo", "all", "--x-grid", "1:2:3"],
            ["asymmetry", "--x-grid", "1:2:3", "--beta", "0"],
            ["index-integral", "--tol", "-1"],
            ["index-integral", "--norm", "natural"],
            ["thermo", "--x-grid", "1:2:3", "--workers", "0"],
            ["frobnicate"],
        ],
    )
    def test_rejected(self, argv):
        with pytest.raises(SystemExit) as excinfo:
            parse_args(argv)
        assert excinfo.value.code == 2

    @pytest.mark.parametrize(
        "content",
        [
            "{ not json",
            json.dumps({"name": "X", "l": 1, "characteristic_numbers": {"p2": 1}}),
            json.dumps({"name": "X", "l": 1, "characteristic_numbers": {"q1": 1}}),
            json.dumps({"name": "X", "characteristic_numbers": {"p1": 3}}),
            json.dumps([1, 2, 3]),
        ],
    )
    def test_malformed_manifold_file(self, tmp_path, content):
        manifold = tmp_path / "broken.json"
        manifold.write_text(content)
        with pytest.raises(SystemExit) as excinfo:
            parse_args(["genus", "--kind", "L", "--manifold", str(manifold)])
        assert excinfo.value.code == 2

    def test_defaults(self):
        config = parse_args(["series", "--kind", "ahat"])
        assert config.kind == "A_HAT"
        assert config.order == 30
        assert config.fmt == DEFAULT_FORMATS["series"] == "text"
        assert config.workers == 4

    def test_negative_grid_with_equals(self):
        config = parse_args(["density", "--x", "1", "--levels", "3", "--grid=-8:8:400"])
        assert config.grid.size == 400
        assert config.grid[0] == -8.0


class TestCommands:
    """Artifacts written to standard output"""

    def test_series_text(self, cli_run):
        code, text = cli_run("series", "--kind", "AHAT", "--order", "0")
        assert code == 0
        assert text == "1\n"

    def test_series_json(self, cli_run):
        code, text = cli_run("series", "--kind", "L", "--order", "4", "--format", "json")
        assert json.loads(text) == {"kind": "L", "order": 4, "coeffs": ["1", "0", "1/12", "0", "-1/720"]}

    def test_series_csv(self, cli_run):
        code, text = cli_run("series", "--kind", "TODD", "--order", "2", "--format", "csv")
        assert text == "k,coeff\n0,1\n1,1/2\n2,1/12\n"

    def test_genus_polynomials(self, cli_run):
        code, text = cli_run("genus", "--kind", "L", "--degree", "2")
        data = json.loads(text)
        assert data["convention"] == "PONTRYAGIN"
        assert data["polynomials"][2]["terms"] == {"p2": "7/45", "p1^2": "-1/45"}
        assert "manifold" not in data

    def test_genus_on_manifold(self, cli_run, manifold_dir):
        code, text = cli_run("genus", "--kind", "L", "--manifold", str(manifold_dir / "cp2.json"))
        manifold = json.loads(text)["manifold"]
        assert manifold == {"name": "CP2", "l": 1, "genus": "1", "signature_index": "2"}

    def test_todd_on_manifold(self, cli_run, manifold_dir):
        code, text = cli_run("genus", "--kind", "TODD", "--manifold", str(manifold_dir / "k3.json"))
        data = json.loads(text)
        assert len(data["polynomials"]) == 3
        assert data["manifold"]["genus"] == "2"
        assert "signature_index" not in data["manifold"]

    def test_genus_csv(self, cli_run):
        code, text = cli_run("genus", "--kind", "AHAT", "--degree", "1", "--format", "csv")
        assert text == "degree,monomial,coefficient\n0,1,1\n1,p1,-1/24\n"

    def test_thermo(self, cli_run):
        code, text = cli_run("thermo", "--x-grid", "0.5:2:4")
        table = pd.read_csv(io.StringIO(text), float_precision="round_trip")
        assert list(table.columns) == ["x", "Z", "U", "betaU"]
        assert table["Z"].iloc[1] == partition_closed(1.0)
        assert table["betaU"].iloc[1] == beta_u(1.0)

    def test_thermo_json(self, cli_run):
        code, text = cli_run("thermo", "--x-grid", "1:1:1", "--format", "json")
        assert json.loads(text)[0]["Z"] == partition_closed(1.0)

    def test_density(self, cli_run, caplog):
        caplog.set_level(logging.INFO, logger="thermogenus")
        code, text = cli_run("density", "--x", "1", "--levels", "0", "--grid=-1:1:3")
        table = pd.read_csv(io.StringIO(text), float_precision="round_trip")
        assert list(table["q"]) == [-1.0, 0.0, 1.0]
        assert table["rho"].iloc[1] == pytest.approx(math.exp(-0.5) / math.sqrt(math.pi), rel=1e-14)
        assert "integral of the density" in caplog.text

    def test_density_with_more_levels(self, cli_run):
        code, text = cli_run("density", "--x", "1.0", "--levels", "10", "--grid=-8:8:5")
        table = pd.read_csv(io.StringIO(text), float_precision="round_trip")
        assert code == 0
        assert list(table["q"]) == [-8.0, -4.0, 0.0, 4.0, 8.0]
        assert np.all(table["rho"] >= 0)

    def test_thermo_underflowing_partition(self, cli_run):
        code, text = cli_run("thermo", "--x-grid", "1:1500:2")
        table = pd.read_csv(io.StringIO(text), float_precision="round_trip")
        assert code == 0
        assert table["Z"].iloc[1] == 0.0
        assert table["betaU"].iloc[1] == pytest.approx(750.0)

    def test_verify_passes(self, cli_run):
        code, text = cli_run("verify", "l-ahat-cosh", "--order", "12")
        data = json.loads(text)
        assert code == 0
        assert data["passed"] is True
        assert data["reports"][0]["residuals"] == {"max_abs_coefficient": "0", "order": 12}

    def test_verify_trace_functorial_json(self, cli_run):
        code, text = cli_run("verify", "trace-functorial", "--x-grid", "0.5:2:3", "--modes", "1000")
        data = json.loads(text)
        assert code == 0
        assert data["passed"] is True
        assert data["reports"][0]["passed"] is True

    def test_verify_failure_exits_one(self, cli_run, monkeypatch):
        monkeypatch.setitem(SUITE_REGISTRY, "always-fails", lambda params: SuiteReport("always-fails", False, {}))
        code, text = cli_run("verify", "always-fails")
        assert code == 1
        assert json.loads(text)["passed"] is False

    def test_asymmetry(self, cli_run):
        code, text = cli_run("asymmetry", "--x-grid", "1:1:1")
        table = pd.read_csv(io.StringIO(text), float_precision="round_trip")
        assert table["f_plus"].iloc[0] == pytest.approx(0.758967069, abs=1e-8)
        assert table["diff"].iloc[0] == pytest.approx(table["fd_check"].iloc[0], rel=1e-6)

    def test_index_integral(self, cli_run):
        code, text = cli_run("index-integral", "--beta", "1", "--norm", "canonical")
        data = json.loads(text)
        assert code == 0
        assert data["normalization"] == "canonical"
        assert data["ch_over_partition_function"] == 1.0
        assert data["value"] > 0
        assert data["error_estimate"] <= 1e-8


class TestExitStatus:
    """Library errors map to exit status 1"""

    def test_missing_characteristic_number(self, cli_run, tmp_path):
        manifold = tmp_path / "bare.json"
        manifold.write_text(json.dumps({"name": "bare", "l": 1, "characteristic_numbers": {"c2": 2}}))
        code, text = cli_run("genus", "--kind", "L", "--manifold", str(manifold))
        assert code == 1
        assert text == ""

    def test_quadrature_non_convergence(self, cli_run, tmp_path):
        config = tmp_path / "strict.json"
        config.write_text(json.dumps({"quadrature_limit": 1}))
        code, text = cli_run("index-integral", "--beta", "50", "--tol", "1e-15", "--config", str(config))
        assert code == 1
        assert text == ""


class TestOutput:
    """Artifacts written to files"""

    def test_output_file(self, cli_run, tmp_path):
        target = tmp_path / "nested" / "l.json"
        code, text = cli_run("series", "--kind", "L", "--order", "2", "--format", "json", "--output", str(target))
        assert code == 0
        assert text == ""
        assert json.loads(target.read_text())["coeffs"] == ["1", "0", "1/12"]

    def test_output_dir_from_environment(self, cli_run, tmp_path, monkeypatch):
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
        cli_run("series", "--kind", "TODD", "--order", "1", "--output", "todd.txt")
        assert (tmp_path / "todd.txt").read_text() == "1\n1/2\n"

    def test_dash_means_stdout(self, cli_run):
        code, text = cli_run("series", "--kind", "L", "--order", "0", "--output", "-")
        assert text == "1\n"

    def test_main_exit_code(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["series", "--kind", "COSH", "--order", "2"])
        assert excinfo.value.code == 0
        assert capsys.readouterr().out == "1\n0\n1/8\n"


@pytest.mark.slow
class TestEndToEnd:
    """Full identity run through the command line"""

    def test_int_verify_all(self, cli_run):
        code, text = cli_run("verify", "all")
        data = json.loads(text)
        assert code == 0
        assert [r["suite"] for r in data["reports"]] == [
            "beta-u-l-series", "partition-ahat-series", "l-ahat-cosh", "asymmetry-decomposition",
        ]

    def test_int_trace_functorial_default_modes(self, cli_run):
        code, text = cli_run("verify", "trace-functorial", "--x-grid", "0.01:20:20", "--logspace")
        assert code == 0
