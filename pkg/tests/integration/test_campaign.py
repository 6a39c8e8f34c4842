"""
End-to-end campaigns over small fields.
"""

import json

import pytest

from quadsbox.family import GammaVerdict
from quadsbox.search import (
    BetaPolicy,
    SearchConfig,
    SearchMode,
    converse_experiment,
    run_campaign,
    write_campaign,
)

EXHAUSTIVE_M3_CLASS_COUNTS = {"NotGamma": 16551424, "Gamma0": 98784, "Gamma1": 127008}


@pytest.fixture(scope="module")
def sample_result():
    cfg = SearchConfig(m=3, k=1, sample_count=3000, seed=1, gamma_quota=3, beta_first_n=2)
    return cfg, run_campaign(cfg)


class TestSampleCampaign:
    """Test a seeded sample campaign at m = 3."""

    def test_summary_counts(self, sample_result):
        """Test visited tuples, class counts and full verdicts."""
        cfg, result = sample_result
        summary = result.summary
        assert summary.visited == 3000
        assert sum(summary.class_counts.values()) == 3000
        assert summary.quota_members == 6
        assert summary.full_verdicts == 4
        assert summary.anomaly_count == 0
        assert summary.modulus_hex == "43"
        assert summary.config_hash == cfg.config_hash()

    def test_gamma_members_are_permutations(self, sample_result):
        """Test that every Gamma record is a consistent permutation."""
        _, result = sample_result
        assert result.records
        for record in result.records:
            assert record.gamma.verdict != GammaVerdict.NOT_GAMMA
            assert record.permutation
            assert record.consistent

    def test_full_verdicts_meet_claims(self, sample_result):
        """Test delta and beta of the fully verified records."""
        _, result = sample_result
        full = [r for r in result.records if r.full]
        assert len(full) == 4
        for record in full:
            if record.gamma.verdict == GammaVerdict.GAMMA0:
                assert (record.delta, record.beta) == (4, 4)
            else:
                assert record.delta == 16
                assert record.beta >= 16
        assert result.summary.delta_histograms["Gamma0"] == {4: 2}
        assert result.summary.delta_histograms["Gamma1"] == {16: 2}

    def test_records_sorted_by_tuple(self, sample_result):
        """Test the record order."""
        _, result = sample_result
        texts = [r.tuple_text for r in result.records]
        assert texts == sorted(texts)
        assert len(set(texts)) == len(texts)

    def test_spectra_screen(self, sample_result):
        """Test that fully verified Gamma0 records are screened against x^17."""
        _, result = sample_result
        screen = result.summary.spectra_screen
        assert screen is not None
        assert screen.gold_exponent == 17
        assert screen.screened == 2
        assert screen.matching + len(screen.mismatched) == 2

    def test_same_seed_same_records(self, sample_result):
        """Test that output does not depend on the worker count."""
        cfg, result = sample_result
        parallel = run_campaign(cfg.model_copy(update={"threads": 2}))
        assert [r.to_json() for r in parallel.records] == [r.to_json() for r in result.records]
        assert parallel.summary.class_counts == result.summary.class_counts

    def test_write_campaign(self, sample_result, tmp_path):
        """Test the file outputs."""
        cfg, result = sample_result
        out = cfg.model_copy(
            update={
                "output_path": str(tmp_path / "r.jsonl"),
                "summary_path": str(tmp_path / "s.json"),
                "csv_path": str(tmp_path / "h.csv"),
            }
        )
        write_campaign(result, out)
        lines = (tmp_path / "r.jsonl").read_text().splitlines()
        assert len(lines) == len(result.records)
        assert json.loads((tmp_path / "s.json").read_text())["visited"] == 3000
        rows = (tmp_path / "h.csv").read_text().splitlines()
        assert rows[0] == "class,metric,value,count"
        assert len(rows) > 1


class TestOtherCampaigns:
    """Test exhaustive mode, the converse experiment and larger fields."""

    def test_exhaustive_m1(self):
        """Test the full tuple space of GF(2^2)."""
        cfg = SearchConfig(m=1, k=1, mode=SearchMode.EXHAUSTIVE, beta_policy=BetaPolicy.SKIP)
        summary = run_campaign(cfg).summary
        assert summary.visited == 256
        assert sum(summary.class_counts.values()) == 256

    def test_converse_k1_sample(self):
        """Test that no NotGamma tuple gives a permutation when k = 1."""
        cfg = SearchConfig(m=3, k=1, sample_count=2000, seed=3, converse=True)
        converse = converse_experiment(cfg)
        assert converse.checked > 0
        assert converse.expected == 0
        assert converse.permutations_found == 0
        assert converse.passed

    def test_m5_sample_with_quota(self):
        """Test GF(2^10) where Gamma members come from the quota."""
        cfg = SearchConfig(
            m=5, k=1, sample_count=500, seed=4, gamma_quota=2, beta_first_n=1, beta_policy=BetaPolicy.SKIP
        )
        result = run_campaign(cfg)
        assert result.summary.anomaly_count == 0
        assert result.summary.full_verdicts == 2
        full = [r for r in result.records if r.full]
        assert sorted(r.delta for r in full) == [4, 64]
        assert all(r.beta is None for r in full)


@pytest.mark.slow
class TestExhaustiveM3:
    """Test the whole tuple space of GF(2^6)."""

    @pytest.mark.parametrize("k", [1, 5])
    def test_every_gamma_member_is_a_permutation(self, k):
        """Test 2^24 tuples with the converse experiment against the pinned class counts."""
        cfg = SearchConfig(
            m=3, k=k, mode=SearchMode.EXHAUSTIVE, beta_first_n=5, converse=True, threads=4
        )
        summary = run_campaign(cfg).summary
        assert summary.visited == 1 << 24
        assert summary.class_counts == EXHAUSTIVE_M3_CLASS_COUNTS
        for label in ("Gamma0", "Gamma1"):
            assert summary.permutation_counts[label] == summary.class_counts[label]
        assert summary.converse.permutations_found == 0
        assert summary.anomaly_count == 0

    def test_thousand_full_verdicts_per_class(self):
        """Test delta, beta and both BCT methods on 1000 members of each class."""
        cfg = SearchConfig(m=3, k=1, mode=SearchMode.EXHAUSTIVE, beta_first_n=1000, threads=4)
        result = run_campaign(cfg)
        summary = result.summary
        assert summary.class_counts == EXHAUSTIVE_M3_CLASS_COUNTS
        assert summary.full_verdicts == 2000
        assert summary.anomaly_count == 0
        full = [r for r in result.records if r.full]
        gamma0 = [r for r in full if r.gamma.verdict == GammaVerdict.GAMMA0]
        gamma1 = [r for r in full if r.gamma.verdict == GammaVerdict.GAMMA1]
        assert len(gamma0) == len(gamma1) == 1000
        assert all((r.delta, r.beta) == (4, 4) for r in gamma0)
        assert all(r.delta == 16 and r.beta is not None for r in gamma1)
        assert all(r.consistent and not r.anomalies for r in full)
