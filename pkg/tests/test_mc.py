import numpy as np
import pytest

from sinterbench.distributions import raw_moment_sums, moments_from_sums
from sinterbench.errors import BudgetError, ConfigError
from sinterbench.mc import McConfig, ground_truth, run_ensemble, run_path
from sinterbench.measurement import DEFAULT_GAUSSIAN, NoiseModel, substream
from sinterbench.pid import ControlConfig, PidGains, run_nominal
from sinterbench.thermal import LumpedParams

CFG = ControlConfig()
GAINS = PidGains()
PLANT = LumpedParams()


class TestRunPath:
    def test_noise_free_equals_nominal(self):
        errors, powers = run_path(CFG, GAINS, PLANT, NoiseModel.none(), substream(0, 0))
        nominal = run_nominal(CFG, GAINS, PLANT)
        np.testing.assert_allclose(errors, [p.error for p in nominal], rtol=1e-12)
        np.testing.assert_allclose(powers, [p.power for p in nominal], rtol=1e-12)

    def test_bit_identical_replay(self):
        a = run_path(CFG, GAINS, PLANT, DEFAULT_GAUSSIAN, substream(11, 5))
        b = run_path(CFG, GAINS, PLANT, DEFAULT_GAUSSIAN, substream(11, 5))
        np.testing.assert_array_equal(a[0], b[0])
        np.testing.assert_array_equal(a[1], b[1])


class TestRunEnsemble:
    def test_single_path_degenerates_to_run_path(self):
        mc = McConfig(paths=1, noise=DEFAULT_GAUSSIAN, seed=3)
        res = run_ensemble(mc, CFG, GAINS, PLANT)
        errors, _ = run_path(CFG, GAINS, PLANT, DEFAULT_GAUSSIAN, substream(3, 0))
        assert res.e_ss.samples[0] == errors[-1]

    def test_seed_reproducibility(self):
        mc = McConfig(paths=500, noise=DEFAULT_GAUSSIAN, seed=9)
        a = run_ensemble(mc, CFG, GAINS, PLANT)
        b = run_ensemble(mc, CFG, GAINS, PLANT)
        np.testing.assert_array_equal(a.e_ss.samples, b.e_ss.samples)
        assert a.error_stats[-1] == b.error_stats[-1]

    def test_thread_count_does_not_change_results(self, monkeypatch):
        mc = McConfig(paths=20_000, noise=DEFAULT_GAUSSIAN, seed=9)
        serial = run_ensemble(mc, CFG, GAINS, PLANT)
        monkeypatch.setenv("SINTERBENCH_THREADS", "3")
        threaded = run_ensemble(mc, CFG, GAINS, PLANT)
        np.testing.assert_array_equal(serial.e_ss.samples, threaded.e_ss.samples)
        assert serial.error_stats[-1] == threaded.error_stats[-1]

    def test_streaming_equals_batch_moments(self):
        mc = McConfig(paths=9000, noise=DEFAULT_GAUSSIAN, seed=2,
                      record_iters=(1, 100, 200))
        res = run_ensemble(mc, CFG, GAINS, PLANT)
        for it in (1, 100, 200):
            xs = res.retained[it]
            mean, std, skew, kurt = moments_from_sums(*raw_moment_sums(xs),
                                                      sample_std=True)
            s = res.error_stats[it - 1]
            assert s.mean == pytest.approx(mean, rel=1e-9, abs=1e-12)
            assert s.std == pytest.approx(std, rel=1e-9)
            assert s.skewness == pytest.approx(skew, rel=1e-9, abs=1e-9)
            assert s.kurtosis == pytest.approx(kurt, rel=1e-9)

    def test_memory_budget_enforced(self):
        mc = McConfig(paths=1_000_000, noise=DEFAULT_GAUSSIAN, seed=0,
                      record_iters=tuple(range(1, 201)), memory_budget_mb=100.0)
        with pytest.raises(BudgetError):
            run_ensemble(mc, CFG, GAINS, PLANT)

    def test_record_iters_validated(self):
        with pytest.raises(ConfigError):
            McConfig(paths=10, noise=DEFAULT_GAUSSIAN, seed=0, record_iters=(0,))
        with pytest.raises(ConfigError):
            McConfig(paths=0, noise=DEFAULT_GAUSSIAN, seed=0)

    def test_path_offset_gives_fresh_draws(self):
        a = run_ensemble(McConfig(paths=100, noise=DEFAULT_GAUSSIAN, seed=0),
                         CFG, GAINS, PLANT)
        b = run_ensemble(McConfig(paths=100, noise=DEFAULT_GAUSSIAN, seed=0,
                                  path_offset=100), CFG, GAINS, PLANT)
        assert not np.array_equal(a.e_ss.samples, b.e_ss.samples)


class TestGroundTruth:
    def test_noise_free_collapses_to_nominal(self):
        gt = ground_truth(CFG, GAINS, PLANT, NoiseModel.none(), 10_000, 0)
        nominal = run_nominal(CFG, GAINS, PLANT)
        assert np.all(gt.samples == gt.samples[0])
        assert gt.samples[0] == pytest.approx(nominal[-1].error, rel=1e-12)

    def test_disjoint_from_sim_domain(self):
        gt = ground_truth(CFG, GAINS, PLANT, DEFAULT_GAUSSIAN, 10_000, 0)
        sim = run_ensemble(McConfig(paths=10_000, noise=DEFAULT_GAUSSIAN, seed=0),
                           CFG, GAINS, PLANT)
        assert not np.array_equal(gt.samples, sim.e_ss.samples)

    def test_minimum_size_enforced(self):
        with pytest.raises(ConfigError):
            ground_truth(CFG, GAINS, PLANT, DEFAULT_GAUSSIAN, 100, 0)
