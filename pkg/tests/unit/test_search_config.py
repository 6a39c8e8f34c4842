"""
Tests for campaign configuration and report output.
"""

import csv
import json

import pytest
from pydantic import ValidationError

from quadsbox.family import CoefficientTuple, GammaVerdict
from quadsbox.field import get_field_spec
from quadsbox.search import (
    BetaPolicy,
    JsonlWriter,
    ReportRecord,
    SearchConfig,
    SearchMode,
    histogram_rows,
    write_histograms_csv,
)
from quadsbox.theory import verify_theorem


class TestSearchConfig:
    """Test validation and the config hash."""

    def test_defaults(self):
        """Test the default campaign."""
        cfg = SearchConfig(m=3, k=1)
        assert cfg.mode == SearchMode.SAMPLE
        assert cfg.beta_policy == BetaPolicy.FIRST_N
        assert cfg.n == 6
        assert cfg.threads == 1

    @pytest.mark.parametrize("m,k", [(2, 1), (3, 3), (3, 2), (0, 1)])
    def test_invalid_field(self, m, k):
        """Test even m, shared factors and even k."""
        with pytest.raises(ValidationError):
            SearchConfig(m=m, k=k)

    def test_exhaustive_limit(self):
        """Test that exhaustive mode stops at 4n <= 28."""
        SearchConfig(m=3, k=1, mode=SearchMode.EXHAUSTIVE)
        with pytest.raises(ValidationError):
            SearchConfig(m=5, k=1, mode=SearchMode.EXHAUSTIVE)

    def test_negative_values(self):
        """Test the numeric bounds."""
        with pytest.raises(ValidationError):
            SearchConfig(m=3, k=1, sample_count=-1)
        with pytest.raises(ValidationError):
            SearchConfig(m=3, k=1, threads=0)

    def test_hash_is_stable(self):
        """Test that the hash ignores output paths and threads."""
        a = SearchConfig(m=3, k=1, seed=5, threads=1)
        b = SearchConfig(m=3, k=1, seed=5, threads=4, output_path="x.jsonl", record_timing=True)
        assert a.config_hash() == b.config_hash()
        assert len(a.config_hash()) == 64

    def test_hash_changes_with_inputs(self):
        """Test that seed, k and policy change the hash."""
        base = SearchConfig(m=3, k=1, seed=5).config_hash()
        assert SearchConfig(m=3, k=1, seed=6).config_hash() != base
        assert SearchConfig(m=3, k=5, seed=5).config_hash() != base
        assert SearchConfig(m=3, k=1, seed=5, beta_policy=BetaPolicy.ALL).config_hash() != base


class TestReportRecord:
    """Test record construction and serialization."""

    def test_from_verdict(self):
        """Test a full record."""
        spec = get_field_spec(3, 1)
        verdict = verify_theorem(spec, CoefficientTuple(c1=1))
        record = ReportRecord.from_verdict("abc", verdict)
        assert record.full
        data = json.loads(record.to_json())
        assert data["tuple"] == "00:01:00:00"
        assert data["config_hash"] == "abc"
        assert data["delta"] == 4
        assert data["verdict"] == "Gamma0"
        assert "elapsed_seconds" not in data

    def test_light(self):
        """Test a light record for a Gamma member."""
        record = ReportRecord.light("abc", "01:02:03:04", GammaVerdict.GAMMA1, True)
        assert not record.full
        data = json.loads(record.to_json())
        assert data["verdict"] == "Gamma1"
        assert data["reasons"] == ["gamma_branch"]
        assert "gamma" not in data
        assert "delta" not in data
        assert data["consistent"] is True

    def test_light_non_permutation_is_anomaly(self):
        """Test that a non-bijective Gamma member is flagged."""
        record = ReportRecord.light("abc", "01:02:03:04", GammaVerdict.GAMMA0, False)
        assert not record.consistent
        assert [a.kind for a in record.anomalies] == ["not_permutation"]

    def test_json_is_canonical(self):
        """Test sorted keys without whitespace."""
        text = ReportRecord.light("h", "00:00:00:01", GammaVerdict.GAMMA0, True).to_json()
        assert " " not in text
        keys = list(json.loads(text))
        assert keys == sorted(keys)


class TestWriters:
    """Test the JSONL and CSV writers."""

    def test_jsonl_file(self, tmp_path):
        """Test one line per record."""
        path = tmp_path / "out.jsonl"
        with JsonlWriter(str(path), flush=True) as writer:
            writer.write(ReportRecord.light("h", "00:00:00:01", GammaVerdict.GAMMA0, True))
            writer.write_line('{"x":1}')
        assert writer.count == 2
        lines = path.read_text().splitlines()
        assert len(lines) == 2
        assert json.loads(lines[1]) == {"x": 1}

    def test_jsonl_stdout(self, capsys):
        """Test that a missing path writes to stdout."""
        with JsonlWriter() as writer:
            writer.write_line('{"y":2}')
        assert capsys.readouterr().out == '{"y":2}\n'

    def test_jsonl_outside_context(self):
        """Test that writing without entering fails."""
        with pytest.raises(RuntimeError):
            JsonlWriter().write_line("{}")

    def test_flush_from_environment(self, monkeypatch):
        """Test QUADSBOX_FLUSH."""
        monkeypatch.setenv("QUADSBOX_FLUSH", "1")
        assert JsonlWriter().flush
        monkeypatch.setenv("QUADSBOX_FLUSH", "0")
        assert not JsonlWriter().flush

    def test_histogram_rows(self):
        """Test the row order."""
        rows = histogram_rows({"Gamma1": {16: 2}, "Gamma0": {4: 3}}, {"Gamma0": {4: 1}})
        assert rows == [
            ("Gamma0", "delta", 4, 3),
            ("Gamma1", "delta", 16, 2),
            ("Gamma0", "beta", 4, 1),
        ]

    def test_histogram_csv(self, tmp_path):
        """Test the CSV header and rows."""
        path = tmp_path / "hist.csv"
        written = write_histograms_csv({"Gamma0": {4: 3}}, {"Gamma0": {4: 3}}, str(path))
        assert written == 2
        with open(path, newline="") as handle:
            rows = list(csv.reader(handle))
        assert rows[0] == ["class", "metric", "value", "count"]
        assert rows[1] == ["Gamma0", "delta", "4", "3"]
