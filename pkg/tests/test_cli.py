import json

import pytest

from cstarfix.cli import main


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


class TestDemoCommand:
    def test_known_demo_exits_zero(self, capsys):
        assert main(["demo", "ex3.8", "--samples", "200"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["ok"]
        stages = {s["stage"]: s for s in payload["stages"]}
        assert stages["metric-axioms-self-distance"]["observed"] == "fail"
        assert stages["contraction-verify"]["observed"] == "pass"

    def test_unknown_demo_exits_two(self, capsys):
        assert main(["demo", "bogus"]) == 2
        assert "registered demos" in capsys.readouterr().err

    def test_structured_output_is_deterministic(self, capsys):
        main(["demo", "cor4.4", "--seed", "5", "--samples", "300"])
        first = capsys.readouterr().out
        main(["demo", "cor4.4", "--seed", "5", "--samples", "300"])
        second = capsys.readouterr().out
        assert first == second

    def test_all_registered_demos_pass(self):
        for demo_id in ("ex2.3", "ex2.4", "ex3.13", "cor4.1", "cor4.5", "cor4.6"):
            assert main(["demo", demo_id, "--samples", "200"]) == 0

    def test_human_format(self, capsys):
        assert main(["demo", "ex2.4", "--samples", "100", "--format", "human"]) == 0
        out = capsys.readouterr().out
        assert "stage" in out and "{" not in out


class TestAxiomsCommand:
    def test_premetric_failure_is_reported_not_fatal(self, tmp_path, capsys):
        cfg = write(tmp_path, "a.json", {"space": "sum_premetric"})
        assert main(["axioms", "--config", cfg, "--samples", "300"]) == 0
        payload = json.loads(capsys.readouterr().out)
        verdicts = {c["axiom"]: c["verdict"] for c in payload["checks"]}
        assert verdicts["self-distance-zero"] == "fail"

    def test_partial_space_all_pass(self, tmp_path, capsys):
        cfg = write(tmp_path, "a.json", {"space": "absdiff_pair"})
        assert main(["axioms", "--config", cfg, "--samples", "300"]) == 0
        assert json.loads(capsys.readouterr().out)["all_pass"]

    def test_unknown_space_exits_two(self, tmp_path):
        cfg = write(tmp_path, "a.json", {"space": "nope"})
        assert main(["axioms", "--config", cfg]) == 2

    def test_malformed_json_exits_two(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["axioms", "--config", str(path)]) == 2
        assert "line" in capsys.readouterr().err


class TestVerifyCommand:
    def test_out_of_range_constant_exits_two(self, tmp_path):
        cfg = write(
            tmp_path, "v.json",
            {"family": "kannan", "k": 0.6, "space": "max_unit_interval",
             "operator": "quartering", "mode": "partial"},
        )
        assert main(["verify", "--config", cfg]) == 2

    def test_certified_verify_exits_zero(self, tmp_path, capsys):
        cfg = write(
            tmp_path, "v.json",
            {"family": "banach", "k": 0.5, "space": "max_unit_interval",
             "operator": "halving", "mode": "partial"},
        )
        assert main(["verify", "--config", cfg, "--samples", "500"]) == 0
        assert json.loads(capsys.readouterr().out)["certified"]

    def test_counterexample_exits_one(self, tmp_path, capsys):
        cfg = write(
            tmp_path, "v.json",
            {"family": "banach", "k": 0.25, "space": "max_unit_interval",
             "operator": "halving", "mode": "partial"},
        )
        assert main(["verify", "--config", cfg, "--samples", "500"]) == 1
        assert "counterexample" in json.loads(capsys.readouterr().out)

    def test_metric_mode_with_phi(self, tmp_path, capsys):
        cfg = write(
            tmp_path, "v.json",
            {"family": "plain", "k": 0.5, "space": "sum_premetric",
             "operator": "halving", "phi": "coordinate_pair", "combiner": "sum"},
        )
        assert main(["verify", "--config", cfg, "--samples", "500"]) == 0


class TestSolveCommand:
    def test_solve_writes_csv_trace(self, tmp_path):
        cfg = write(
            tmp_path, "s.json",
            {"family": "plain", "k": 0.5, "space": "sum_premetric",
             "operator": "halving", "phi": "coordinate_pair", "x0": 1.0},
        )
        out = tmp_path / "trace.csv"
        assert main(["solve", "--config", cfg, "--out", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "n,step_norm,apriori_bound,phi_residual"
        steps = [float(line.split(",")[1]) for line in lines[1:]]
        # halving orbit: consecutive step norms halve
        for a, b in zip(steps, steps[1:]):
            assert b == pytest.approx(0.5 * a, rel=1e-9)

    def test_partial_solve_structured(self, tmp_path, capsys):
        cfg = write(
            tmp_path, "s.json",
            {"family": "banach", "k": 0.5, "space": "max_unit_interval",
             "operator": "halving", "mode": "partial", "x0": 1.0},
        )
        assert main(["solve", "--config", cfg]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["certified"]
        assert payload["self_distance_norm"] <= 1e-10

    def test_non_contractive_solve_exits_one(self, tmp_path):
        cfg = write(
            tmp_path, "s.json",
            {"family": "plain", "k": 0.5, "space": "sum_premetric",
             "operator": "identity", "phi": "coordinate_pair", "x0": 0.3,
             "max_iter": 40},
        )
        assert main(["solve", "--config", cfg]) == 1


class TestFlagValidation:
    def test_bad_samples_rejected(self):
        with pytest.raises(SystemExit) as exc:
            main(["demo", "ex2.4", "--samples", "0"])
        assert exc.value.code == 2

    def test_bad_tol_rejected(self):
        with pytest.raises(SystemExit) as exc:
            main(["demo", "ex2.4", "--tol", "-1"])
        assert exc.value.code == 2
