import json

import pytest

from sinterbench.cli import main


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# config_hash=")
    header = lines[1].split(",")
    return header, [line.split(",") for line in lines[2:]]


class TestSim:
    def test_noise_free_converges(self, tmp_path):
        assert main(["sim", "--noise", "none", "--out", str(tmp_path)]) == 0
        header, rows = read_csv(tmp_path / "trajectory.csv")
        assert header == ["iter", "error", "power", "temp"]
        assert len(rows) == 200
        assert abs(float(rows[-1][1])) < 0.05

    def test_seeded_runs_identical(self, tmp_path):
        for sub in ("a", "b"):
            main(["sim", "--noise", "gaussian:0,0.5", "--seed", "7",
                  "--out", str(tmp_path / sub)])
        assert (tmp_path / "a/trajectory.csv").read_bytes() == \
               (tmp_path / "b/trajectory.csv").read_bytes()

    def test_zero_iters_is_config_error(self, tmp_path):
        assert main(["sim", "--noise", "none", "--iters", "0",
                     "--out", str(tmp_path)]) == 2


class TestMcAndDist:
    def test_single_path_matches_sim(self, tmp_path):
        main(["sim", "--noise", "gaussian:0,0.5", "--seed", "3",
              "--out", str(tmp_path / "sim")])
        main(["mc", "--paths", "1", "--noise", "gaussian:0,0.5", "--seed", "3",
              "--out", str(tmp_path / "mc")])
        _, traj = read_csv(tmp_path / "sim/trajectory.csv")
        _, ess = read_csv(tmp_path / "mc/e_ss.csv")
        assert float(ess[0][0]) == pytest.approx(float(traj[-1][1]), rel=1e-12)

    def test_mc_outputs(self, tmp_path):
        assert main(["mc", "--paths", "500", "--noise", "uniform:-1.5,1.5",
                     "--record", "50", "--out", str(tmp_path)]) == 0
        header, rows = read_csv(tmp_path / "stats.csv")
        assert header == ["iter", "signal", "mean", "std", "skew", "kurt",
                          "mode", "ci_lo", "ci_hi"]
        assert len(rows) == 2 * 200  # error and power series
        rheader, rrows = read_csv(tmp_path / "retained.csv")
        assert rheader == ["iter", "path", "value"]
        assert len(rrows) == 2 * 500  # iterations 50 and 200

    def test_dist_single_atom_matches_nominal(self, tmp_path):
        assert main(["dist", "--rep", "1", "--noise", "uniform:-1.5,1.5",
                     "--out", str(tmp_path)]) == 0
        payload = json.loads((tmp_path / "e_ss.json").read_text())
        assert "config_hash" in payload
        (point,) = payload["points"]
        assert abs(point[0]) < 0.05  # nominal-like convergence at the median
        assert point[1] == 1.0

    def test_bad_noise_spec(self, tmp_path):
        assert main(["mc", "--paths", "10", "--noise", "cauchy:0,1",
                     "--out", str(tmp_path)]) == 2


class TestCalib:
    def test_point_value(self, capsys):
        assert main(["calib", "--raw", "59000", "--point"]) == 0
        assert float(capsys.readouterr().out.strip()) == pytest.approx(442.79, abs=0.5)

    def test_missing_raw_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["calib", "--point"])
        assert exc.value.code == 2

    def test_mc_distribution_file(self, tmp_path):
        assert main(["calib", "--raw", "59000", "--mc", "2000",
                     "--out", str(tmp_path)]) == 0
        _, rows = read_csv(tmp_path / "calib_samples.csv")
        vals = [float(r[0]) for r in rows]
        assert len(vals) == 2000
        assert all(300.0 < v < 600.0 for v in vals)

    def test_mixture_distribution_file(self, tmp_path):
        assert main(["calib", "--raw", "59000", "--mixture", "16",
                     "--out", str(tmp_path)]) == 0
        payload = json.loads((tmp_path / "calib_mixture.json").read_text())
        assert len(payload["points"]) == 16


class TestBenchAndTune:
    def test_bench_quick_plan(self, tmp_path):
        plan = tmp_path / "plan.json"
        plan.write_text(json.dumps({
            "noises": ["gaussian:0,0.5"], "mc_sizes": [256],
            "rep_sizes": [4], "repetitions": 2, "m_gt": 10000}))
        assert main(["bench", "--plan", str(plan), "--out", str(tmp_path)]) == 0
        lines = (tmp_path / "bench_results.csv").read_text().splitlines()
        assert len(lines) == 2 + 2  # hash comment, header, 2 records
        meta = json.loads((tmp_path / "bench_metadata.json").read_text())
        assert meta["repetitions"] == 2 and "config_hash" in meta

    def test_malformed_plan_exits_2(self, tmp_path):
        plan = tmp_path / "plan.json"
        plan.write_text("{not json")
        assert main(["bench", "--plan", str(plan), "--out", str(tmp_path)]) == 2

    def test_tune_prefers_better_gains(self, tmp_path, capsys):
        assert main(["tune", "--grid", "kp=0,0.1;ki=0,0.05",
                     "--out", str(tmp_path)]) == 0
        best = json.loads((tmp_path / "best_gains.json").read_text())
        assert best["kp"] == 0.1 and best["ki"] == 0.05

    def test_bad_grid_exits_2(self, tmp_path):
        assert main(["tune", "--grid", "kq=1", "--out", str(tmp_path)]) == 2
