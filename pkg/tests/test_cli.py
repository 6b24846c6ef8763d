import numpy as np
import pytest

from wavescatter import build_grid, dalembert_constant, gaussian_mover
from wavescatter.cli import main


def read_long_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0] == "k,t,j,x,u"
    rows = [line.split(",") for line in lines[1:]]
    return [(int(k), float(t), int(j), float(x), float(u)) for k, t, j, x, u in rows]


class TestRunCommand:
    def test_constant_medium_matches_translation(self, tmp_path):
        out = tmp_path / "field.csv"
        code = main([
            "run", "--a", "-16", "--b", "16", "--n", "128", "--T", "4",
            "--medium", "constant", "--zeta", "1.0",
            "--data", "gaussian", "--amplitude", "2", "--decay", "0.05", "--center", "-10",
            "--mode", "regular", "--out", str(out),
        ])
        assert code == 0
        rows = read_long_csv(out)
        alpha = gaussian_mover(2.0, 0.05, -10.0)
        zero = lambda x: np.zeros_like(np.asarray(x, dtype=np.float64))
        for k, t, j, x, u in rows[-129:]:
            assert u == dalembert_constant(alpha, zero, np.array([x]), t)[0]

    def test_prints_grid_facts(self, tmp_path, capsys):
        out = tmp_path / "field.csv"
        main([
            "run", "--a", "-1", "--b", "1", "--n", "2", "--T", "0.9",
            "--medium", "constant", "--data", "zero",
            "--mode", "regular", "--out", str(out),
        ])
        printed = capsys.readouterr().out
        assert "delta=1" in printed
        assert "m=0" in printed
        assert "t_m=0" in printed

    def test_missing_medium_file_names_path(self, tmp_path, capsys):
        out = tmp_path / "field.csv"
        code = main([
            "run", "--a", "0", "--b", "1", "--n", "4", "--T", "1",
            "--medium-file", str(tmp_path / "nope.csv"),
            "--data", "zero", "--mode", "regular", "--out", str(out),
        ])
        assert code == 1
        assert "nope.csv" in capsys.readouterr().err

    def test_dirac_mode_through_ramp(self, tmp_path):
        out = tmp_path / "field.csv"
        code = main([
            "run", "--a", "-15", "--b", "25", "--n", "256", "--T", "20",
            "--medium", "ramp", "--data", "dirac", "--position", "-5",
            "--mode", "dirac", "--out", str(out), "--record", "final",
        ])
        assert code == 0
        rows = read_long_csv(out)
        us = np.array([u for _, _, _, _, u in rows])
        xs = np.array([x for _, _, _, x, u in rows])
        # the transmitted atom survives near x = 15 with a stabilized coefficient
        peak = np.argmax(np.abs(us))
        assert xs[peak] == 15.0

    def test_mode_data_mismatch(self, tmp_path, capsys):
        out = tmp_path / "f.csv"
        code = main([
            "run", "--a", "0", "--b", "1", "--n", "4", "--T", "1",
            "--medium", "constant", "--data", "gaussian",
            "--mode", "dirac", "--out", str(out),
        ])
        assert code == 1
        assert "dirac" in capsys.readouterr().err

    def test_random_step_requires_seed(self, tmp_path, capsys):
        out = tmp_path / "f.csv"
        code = main([
            "run", "--a", "0", "--b", "11", "--n", "8", "--T", "1",
            "--medium", "random-step", "--data", "zero",
            "--mode", "regular", "--out", str(out),
        ])
        assert code == 1
        assert "--seed" in capsys.readouterr().err

    def test_medium_file_round_trip(self, tmp_path):
        from wavescatter import fileio

        med_path = tmp_path / "medium.csv"
        fileio.write_medium_csv(med_path, [0.5], [1.0, 2.25])
        out = tmp_path / "field.csv"
        code = main([
            "run", "--a", "-4", "--b", "4", "--n", "64", "--T", "2",
            "--medium-file", str(med_path),
            "--data", "gaussian", "--center", "-2", "--decay", "2.0",
            "--mode", "regular", "--out", str(out), "--out-format", "dense",
        ])
        assert code == 0
        rows = out.read_text().splitlines()
        grid, temporal = build_grid(-4.0, 4.0, 64, 2.0)
        assert len(rows) == temporal.m + 1
        assert len(rows[0].split(",")) == 65

    def test_bump_at_rest_runs_preliminary_conversion(self, tmp_path):
        out = tmp_path / "field.csv"
        code = main([
            "run", "--a", "-8", "--b", "8", "--n", "64", "--T", "2",
            "--medium", "constant", "--data", "bump-at-rest", "--center", "0", "--decay", "1",
            "--mode", "regular", "--out", str(out), "--record", "final",
        ])
        assert code == 0
        rows = read_long_csv(out)
        us = np.array([u for *_, u in rows])
        # the bump splits into two half-amplitude movers
        assert us.max() == pytest.approx(1.0, abs=0.05)


class TestVerifyCommand:
    def test_default_suites_pass(self, capsys):
        assert main(["verify", "--n", "8", "--trials", "5", "--seed", "1"]) == 0
        printed = capsys.readouterr().out
        for name in (
            "factorization",
            "unitarity",
            "spectral-radius",
            "norm-dissipation",
            "oracle-equivalence",
            "step-reference",
        ):
            assert f"PASS {name}" in printed

    def test_zero_trials_vacuous_with_warning(self, capsys):
        assert main(["verify", "--trials", "0"]) == 0
        printed = capsys.readouterr().out
        assert "vacuous" in printed.lower() or "warning" in printed.lower()

    def test_corrupted_weight_rejected(self, capsys):
        code = main(["verify", "--n", "8", "--trials", "1", "--corrupt-weight", "3"])
        assert code == 1
        assert "(-1, 1)" in capsys.readouterr().err

    def test_dense_limit_enforced(self, capsys):
        assert main(["verify", "--n", "512", "--trials", "1"]) == 1

    def test_dumps(self, tmp_path):
        matrix = tmp_path / "A.csv"
        ledger = tmp_path / "ledger.csv"
        code = main([
            "verify", "--n", "8", "--trials", "2", "--seed", "0",
            "--dump-matrix", str(matrix), "--dump-ledger", str(ledger),
        ])
        assert code == 0
        assert len(matrix.read_text().splitlines()) == 18
        assert ledger.read_text().splitlines()[0] == "k,node,direction,amplitude"


class TestExperimentCommands:
    def test_convergence_writes_report(self, tmp_path, capsys):
        code = main([
            "experiment", "convergence", "--pmin", "5", "--pmax", "6", "--pref", "8",
            "--outdir", str(tmp_path),
        ])
        assert code == 0
        lines = (tmp_path / "convergence.csv").read_text().splitlines()
        assert lines[0] == "n,E"
        assert len(lines) == 3
        assert "slope" in capsys.readouterr().out
        assert (tmp_path / "params.txt").exists()

    def test_ramp_writes_snapshots(self, tmp_path):
        code = main(["experiment", "ramp", "--p", "7", "--outdir", str(tmp_path)])
        assert code == 0
        for name in ("before.csv", "after.csv", "params.txt"):
            assert (tmp_path / name).exists()
        header = (tmp_path / "after.csv").read_text().splitlines()[0]
        assert header == "x,u,singular"

    def test_oscillatory_deterministic_outputs(self, tmp_path):
        one = tmp_path / "one"
        two = tmp_path / "two"
        for outdir in (one, two):
            code = main([
                "experiment", "oscillatory", "--seed", "3", "--shift", "15",
                "--n", "256", "--outdir", str(outdir),
            ])
            assert code == 0
        for name in ("before.csv", "during.csv", "after.csv"):
            assert (one / name).read_text() == (two / name).read_text()

    def test_perf_writes_timings(self, tmp_path):
        code = main([
            "experiment", "perf", "--n", "64,128,256", "--T", "2",
            "--outdir", str(tmp_path),
        ])
        assert code == 0
        lines = (tmp_path / "timings.csv").read_text().splitlines()
        assert lines[0] == "n,seconds,backend"
        assert len(lines) == 4

    def test_perf_both_backends(self, tmp_path, capsys):
        code = main([
            "experiment", "perf", "--n", "64,128,256", "--T", "2",
            "--backend", "both", "--outdir", str(tmp_path),
        ])
        assert code == 0
        printed = capsys.readouterr().out
        lines = (tmp_path / "timings.csv").read_text().splitlines()
        assert len(lines) == 7
        assert "speedup" in printed

    def test_unknown_experiment_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["experiment", "warp", "--outdir", "x"])
        assert exc.value.code == 2

    def test_invalid_parameters_exit_nonzero(self, tmp_path, capsys):
        code = main([
            "experiment", "convergence", "--pmin", "5", "--pmax", "6", "--pref", "7",
            "--outdir", str(tmp_path),
        ])
        assert code == 1
        assert "p_max + 2" in capsys.readouterr().err
