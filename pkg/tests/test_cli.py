"""
Tests for src/cli - argument parsing, exit codes and output formats.

Commands are driven through main(argv) so exit codes are checked without a
subprocess.  The run banner and logs go to stderr; assertions on stdout
therefore see only the command output.

Run with:
    python3 -m pytest tests/test_cli.py -v
"""

from __future__ import annotations

import json
import math

import pytest

from src import checks
from src.checks import CheckResult
from src.cli import RunConfig, build_parser, main, parse_real


def _json(path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

class TestParseReal:
    @pytest.mark.parametrize(
        "text, expected",
        [("pi-3", math.pi - 3.0), ("PI-3", math.pi - 3.0), ("1/3", 1.0 / 3.0), ("0.25", 0.25), ("-2", -2.0)],
    )
    def test_accepted_forms(self, text, expected):
        """Decimals, fractions and the pi-3 token."""
        assert parse_real(text) == pytest.approx(expected)

    @pytest.mark.parametrize("text", ["abc", "1/0", "", "pi"])
    def test_rejected(self, text):
        """Anything else raises ValueError."""
        with pytest.raises(ValueError):
            parse_real(text)


class TestParser:
    def test_global_flags_before_command(self):
        """--seed and --samples are read before the subcommand."""
        args = build_parser().parse_args(["--seed", "3", "--samples", "7", "check", "frame"])
        assert (args.seed, args.samples, args.suite) == (3, 7, "frame")

    def test_global_flags_after_command(self):
        """The same flags are accepted after the subcommand."""
        args = build_parser().parse_args(["sample", "alpha0", "--samples", "5", "--seed", "4", "--format", "json"])
        assert (args.samples, args.seed, args.format, args.kind) == (5, 4, "json", "alpha0")

    def test_flags_after_command_keep_earlier_values(self):
        """A flag given only before the subcommand is not reset by it."""
        args = build_parser().parse_args(["--seed", "9", "check", "frame", "--samples", "2"])
        assert (args.seed, args.samples) == (9, 2)

    def test_defaults_without_flags(self):
        """With no common flags the configured defaults apply."""
        args = build_parser().parse_args(["renorm", "--u", "0.5", "--N", "4"])
        assert args.samples is None and args.out is None and args.format == "csv"

    def test_sample_count_default(self):
        """Without --samples the configured default applies."""
        assert RunConfig(command="sample").sample_count >= 1
        assert RunConfig(command="sample", samples=12).sample_count == 12


# ---------------------------------------------------------------------------
# Exit codes
# ---------------------------------------------------------------------------

class TestExitCodes:
    def test_bad_real(self):
        """An unparsable --u is a usage error."""
        assert main(["renorm", "--u", "abc", "--N", "10"]) == 2

    def test_unknown_suite(self):
        """Suites outside the registry are rejected by the parser."""
        assert main(["check", "nope"]) == 2

    def test_missing_command(self):
        """A command is required."""
        assert main([]) == 2

    def test_geometric_case(self):
        """l = 0 has no X sampler."""
        assert main(["--samples", "5", "sample", "x", "--N", "10", "--alpha", "0.3", "--l", "0"]) == 2

    def test_y_needs_parameters(self):
        """sample y without --omega/--varphi is a usage error."""
        assert main(["--samples", "5", "sample", "y"]) == 2

    def test_bad_bin_width(self):
        """A non-positive --bin-width is rejected before any work."""
        assert main(["--bin-width", "0", "--samples", "5", "sample", "alpha0"]) == 2

    def test_failing_check(self, monkeypatch, capsys):
        """A failed record maps to exit code 1."""
        monkeypatch.setitem(checks.SUITES, "connection",
                            lambda seed, samples: [CheckResult("forced", 1.0, 0.0, False)])
        assert main(["check", "connection"]) == 1
        assert capsys.readouterr().out == "[FAIL] forced 1 0\n"


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

class TestRenorm:
    def test_figure_one_record(self, tmp_path):
        """pi-3 at N = 2260 reports c = 113, d = -16, a = 7."""
        out = tmp_path / "renorm.json"
        assert main(["--out", str(out), "renorm", "--u", "pi-3", "--N", "2260"]) == 0
        report = _json(out)
        assert (report["c"], report["d"], report["a"], report["b"]) == (113, -16, 7, -1)
        assert report["n"] == 2260
        assert report["passed"] is True
        assert report["cusp_height"] >= report["frame_v"] - 1e-6

    @pytest.mark.parametrize("u, n, c", [("1/3", "3", 1), ("pi-3", "10", 7)])
    def test_small_cases(self, tmp_path, u, n, c):
        """Exact fractions and small N."""
        out = tmp_path / "r.json"
        main(["--out", str(out), "renorm", "--u", u, "--N", n])
        assert _json(out)["c"] == c

    def test_stdout(self, capsys):
        """Without --out the JSON goes to stdout."""
        assert main(["renorm", "--u", "0.5", "--N", "4"]) == 0
        assert json.loads(capsys.readouterr().out)["c"] == 2


class TestSample:
    def test_raw_csv(self, capsys):
        """Header plus one row per draw."""
        assert main(["--samples", "5", "--out", "-", "sample", "alpha0"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "value" and len(lines) == 6

    def test_flags_after_kind(self, capsys):
        """sample alpha0 --samples 5 runs with the count given after the kind."""
        assert main(["sample", "alpha0", "--samples", "5", "--out", "-"]) == 0
        assert len(capsys.readouterr().out.splitlines()) == 6

    def test_byte_identical(self, tmp_path):
        """Identical arguments give identical bytes."""
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            assert main(["--seed", "11", "--samples", "20", "--out", str(path), "sample", "alpha0"]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert b"\r\n" not in a.read_bytes()

    def test_json_summary(self, tmp_path):
        """--format json writes a flat summary record."""
        out = tmp_path / "s.json"
        assert main(["--samples", "8", "--format", "json", "--out", str(out), "sample", "y00",
                     "--x-fixed", "0.5"]) == 0
        record = _json(out)
        assert record["kind"] == "y00" and record["count"] == 8
        assert {"mean", "median", "mean_abs_square", "seed"} <= set(record)

    def test_histogram(self, tmp_path):
        """--histogram writes bin_left,density."""
        out = tmp_path / "h.csv"
        assert main(["--samples", "50", "--bin-width", "1/4", "--out", str(out),
                     "sample", "x", "--N", "20", "--alpha", "pi-3", "--k", "1", "--histogram"]) == 0
        assert out.read_text(encoding="utf-8").splitlines()[0] == "bin_left,density"


class TestCheck:
    def test_connection_passes(self, capsys):
        """A fast suite prints [PASS] lines and exits 0."""
        assert main(["--samples", "5", "check", "connection"]) == 0
        assert capsys.readouterr().out.startswith("[PASS] connection_identity_rel_error ")


@pytest.mark.slow
class TestFigures:
    def test_figure_one(self, tmp_path):
        """fig 1 writes the histogram CSV and its JSON sidecar, and passes."""
        out = tmp_path / "fig1.csv"
        assert main(["--out", str(out), "fig", "1"]) == 0
        assert out.read_text(encoding="utf-8").splitlines()[0] == "bin_left,xtilde_density,y_density"
        side = _json(tmp_path / "fig1.json")
        assert (side["c"], side["d"], side["a"]) == (113, -16, 7)
        assert side["varphi"] == 0.0 and side["passed"] is True

    def test_figure_two_deterministic(self, tmp_path):
        """Repeated fig 2 runs are byte-identical."""
        a, b = tmp_path / "a" / "fig2.csv", tmp_path / "b" / "fig2.csv"
        for path in (a, b):
            main(["--seed", "1", "--out", str(path), "fig", "2"])
        assert a.read_bytes() == b.read_bytes()
        assert 0.3535 <= _json(a.with_suffix(".json"))["varphi"] <= 0.3545
