"""
Tests for src/run_summary - the 80-column run banner.

Run with:
    python3 -m pytest tests/test_run_summary.py -v
"""

from __future__ import annotations

from dataclasses import asdict

from src.config import CONFIG
from src.run_summary import WIDTH, format_summary, print_run_summary


def _config(**overrides) -> dict:
    cfg = asdict(CONFIG)
    cfg.update(overrides)
    return cfg


class TestLayout:
    def test_every_line_is_80_wide(self):
        """All lines are exactly WIDTH characters."""
        text = format_summary(_config(), command="fig 1", run_id="abc")
        assert all(len(line) == WIDTH for line in text.splitlines())

    def test_long_values_are_clipped(self):
        """Overlong commands are truncated, not wrapped."""
        text = format_summary(_config(), command="x" * 200)
        assert all(len(line) == WIDTH for line in text.splitlines())

    def test_ascii_only(self):
        """No box-drawing characters outside ASCII."""
        assert format_summary(_config()).isascii()

    def test_sections_present(self):
        """The three sections appear in order."""
        text = format_summary(_config(), command="check parseval")
        first = text.index("SECTION 1 - Command")
        second = text.index("SECTION 2 - Active Configuration")
        third = text.index("SECTION 3 - Readiness Checklist")
        assert first < second < third
        assert "check parseval" in text


class TestChecklist:
    def test_small_cutoff_warns(self):
        """series_n_max below 1000 gets a [WARN] line."""
        assert "[WARN] series_n_max=50" in format_summary(_config(series_n_max=50))

    def test_default_cutoff_ok(self):
        """The default cutoff passes."""
        assert "[OK] Series cutoff" in format_summary(_config(series_n_max=1000))

    def test_output_dir(self, tmp_path):
        """Existing output directories are [OK], missing ones [WARN]."""
        assert "[OK] Output directory present" in format_summary(_config(output_dir=str(tmp_path)))
        missing = str(tmp_path / "nowhere")
        assert "[WARN] Output directory missing" in format_summary(_config(output_dir=missing))

    def test_workers_line(self):
        """A worker line appears only for parallel sampling."""
        assert "threads" not in format_summary(_config(workers=1))
        assert "on 4 threads" in format_summary(_config(workers=4))


def test_prints_to_stderr(capsys):
    """The banner goes to stderr; stdout stays clean."""
    print_run_summary(_config(), command="renorm")
    out, err = capsys.readouterr()
    assert out == ""
    assert "SECTION 1 - Command" in err
