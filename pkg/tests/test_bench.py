import csv
import io

import pytest

from sinterbench.bench import (BENCH_CSV_HEADER, BenchPlan, BenchmarkRecord,
                               noise_tag, records_to_csv_rows, run_benchmark,
                               speedup_at_matched_accuracy)
from sinterbench.errors import ConfigError
from sinterbench.measurement import DEFAULT_GAUSSIAN, DEFAULT_UNIFORM
from sinterbench.pid import ControlConfig, PidGains
from sinterbench.thermal import LumpedParams

CFG = ControlConfig()
GAINS = PidGains()
PLANT = LumpedParams()

TINY = BenchPlan(noises=(DEFAULT_GAUSSIAN,), mc_sizes=(256, 1024),
                 rep_sizes=(4, 16), repetitions=2, m_gt=10_000, seed=0)


@pytest.fixture(scope="module")
def tiny_run():
    return run_benchmark(TINY, CFG, GAINS, PLANT)


class TestRunBenchmark:
    def test_record_count_and_shape(self, tiny_run):
        records, metadata = tiny_run
        assert len(records) == 4  # 1 noise x (2 mc + 2 rep)
        for r in records:
            assert r.method in ("mc", "distributional")
            assert r.w1_mean >= 0 and r.w1_std >= 0 and r.runtime_ms_mean > 0
            assert r.repetitions == 2
        assert metadata["timer_resolution_ns"] >= 1
        assert "timer_warning" in metadata

    def test_distributional_w1_identical_across_reps(self, tiny_run):
        records, _ = tiny_run
        for r in records:
            if r.method == "distributional":
                assert r.w1_std == 0.0  # deterministic engine, fixed ground truth
            else:
                assert r.w1_std > 0.0   # fresh substreams per repetition

    def test_mc_accuracy_improves_with_size(self, tiny_run):
        records, _ = tiny_run
        mc = {r.size: r.w1_mean for r in records if r.method == "mc"}
        assert mc[1024] < mc[256]

    def test_plan_validation(self):
        with pytest.raises(ConfigError):
            BenchPlan(noises=(DEFAULT_GAUSSIAN,), repetitions=1)
        with pytest.raises(ConfigError):
            BenchPlan(noises=())


class TestSpeedupReport:
    def test_matched_and_unmatched_selection(self):
        def rec(method, size, w1, rt):
            return BenchmarkRecord(method, size, "g", w1, 0.0, rt, 0.0, 2, 0)
        records = [rec("mc", 256, 0.04, 10.0), rec("mc", 4096, 0.01, 160.0),
                   rec("distributional", 32, 0.02, 8.0)]
        (rep,) = speedup_at_matched_accuracy(records)
        assert rep.matched and rep.mc_cell.size == 4096
        assert rep.speedup == pytest.approx(20.0)
        # no MC cell reaches the accuracy: flagged, largest cell reported
        records = [rec("mc", 256, 0.04, 10.0),
                   rec("distributional", 32, 0.001, 8.0)]
        (rep,) = speedup_at_matched_accuracy(records)
        assert not rep.matched and rep.mc_cell.size == 256

    def test_near_tied_accuracy_prefers_faster_cell(self):
        def rec(method, size, w1, rt):
            return BenchmarkRecord(method, size, "g", w1, 0.0, rt, 0.0, 2, 0)
        records = [rec("mc", 256, 0.05, 10.0), rec("mc", 16000, 0.011, 1200.0),
                   rec("distributional", 32, 0.0125, 60.0),
                   rec("distributional", 128, 0.0119, 450.0)]
        (rep,) = speedup_at_matched_accuracy(records)
        # 0.0125 is within 10% of 0.0119: the 60 ms cell wins the tradeoff
        assert rep.dist_cell.size == 32
        assert rep.speedup == pytest.approx(20.0)

    def test_requires_both_methods(self):
        r = BenchmarkRecord("mc", 256, "g", 0.1, 0.0, 1.0, 0.0, 2, 0)
        with pytest.raises(ConfigError):
            speedup_at_matched_accuracy([r])


class TestCsvOutput:
    def test_rows_parse_with_quoted_noise_tag(self, tiny_run):
        records, _ = tiny_run
        rows = records_to_csv_rows(records)
        assert rows[0] == BENCH_CSV_HEADER
        parsed = list(csv.reader(io.StringIO("\n".join(rows))))
        assert parsed[0] == BENCH_CSV_HEADER.split(",")
        for row in parsed[1:]:
            assert len(row) == 9
            assert row[2] == noise_tag(DEFAULT_GAUSSIAN)
            float(row[3]); float(row[5])  # numeric fields round-trip


def test_noise_tags():
    assert noise_tag(DEFAULT_GAUSSIAN) == "gaussian:0,0.5"
    assert noise_tag(DEFAULT_UNIFORM) == "uniform:-1.5,1.5"
