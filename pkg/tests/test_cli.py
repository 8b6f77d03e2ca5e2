import csv
import io
import json
from fractions import Fraction

import pytest

from robustness_envelope import cli, exactmath
from robustness_envelope.image_space import ImageTensor, SpaceParams, encode_image


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestBounds:
    def test_csv_three_rows(self, capsys):
        code, out, _ = run_cli(capsys, "bounds", "--r", "0.5", "--n", "224",
                               "--h", "3", "--b", "8", "--p", "0,1,2")
        assert code == 0
        lines = [l for l in out.splitlines() if l and not l.startswith("#")]
        rows = list(csv.reader(lines))
        assert rows[0][0] == "p"
        assert len(rows) == 4
        assert rows[3][1] == "4.69620"

    def test_json_round_trip(self, capsys):
        code, out, _ = run_cli(capsys, "bounds", "--r", "0.5", "--n", "224",
                               "--h", "3", "--b", "8", "--p", "0,1,2",
                               "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert len(payload["rows"]) == 3
        assert payload["config"]["r"] == 0.5

    def test_missing_r_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exit_info:
            cli.main(["bounds", "--n", "4", "--h", "1", "--b", "1"])
        assert exit_info.value.code == 2

    def test_c_parametrization(self, capsys):
        # c = 1 reproduces the unit-c expansion size 2 + sqrt(h) n
        code, out, _ = run_cli(capsys, "bounds", "--c", "1.0", "--n", "10",
                               "--h", "1", "--b", "1", "--p", "1")
        assert code == 0
        row = [l for l in out.splitlines() if l.startswith("1,")][0]
        assert row.split(",")[1] == "12.0000"

    def test_c_outside_domain_exits_2(self, capsys):
        code, _, err = run_cli(capsys, "bounds", "--c", "0.3", "--n", "10",
                               "--h", "1", "--b", "1")
        assert code == 2 and "outside" in err

    def test_r_and_c_mutually_exclusive(self, capsys):
        with pytest.raises(SystemExit) as exit_info:
            cli.main(["bounds", "--r", "0.5", "--c", "1.0", "--n", "4",
                      "--h", "1", "--b", "1"])
        assert exit_info.value.code == 2

    def test_invalid_r_exits_2(self, capsys):
        code, _, err = run_cli(capsys, "bounds", "--r", "1.5", "--n", "4",
                               "--h", "1", "--b", "1")
        assert code == 2 and "error" in err


class TestVerify:
    def test_binomial_suite_passes(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "binomial", "--seed", "7")
        assert code == 0
        assert "PASS binomial/mode-bound" in out
        assert out.strip().endswith("PASS overall")

    def test_json_format(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "theorem2", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["passed"] is True
        assert all(c["passed"] for c in payload["checks"])

    def test_deterministic_report(self, capsys):
        _, first, _ = run_cli(capsys, "verify", "theorem2", "--seed", "7")
        _, second, _ = run_cli(capsys, "verify", "theorem2", "--seed", "7")
        assert first == second

    def test_unknown_suite_exits_2(self):
        with pytest.raises(SystemExit) as exit_info:
            cli.main(["verify", "nonsense"])
        assert exit_info.value.code == 2

    def test_injected_mutant_detected(self, capsys, monkeypatch):
        # Weakening the tail-ratio bound exponent must trip the sweep and
        # name the counterexample.
        monkeypatch.setattr(
            exactmath, "hoeffding_exponent",
            lambda n, k: Fraction(-3 * (k - 1) ** 2, n))
        code, out, _ = run_cli(capsys, "verify", "binomial")
        assert code == 1
        assert "FAIL binomial/hoeffding-ratio" in out
        assert "first violation" in out


class TestAttack:
    def test_minimal_distance_two(self, capsys, tmp_path):
        image = ImageTensor(SpaceParams(2, 1, 1), (0, 0, 0, 0))
        path = tmp_path / "img.json"
        path.write_bytes(encode_image(image))
        code, out, _ = run_cli(capsys, "attack", "--image", str(path),
                               "--norm", "0")
        assert code == 0
        payload = json.loads(out)
        assert payload["distance"] == 2.0

    def test_findpert_success_and_bound(self, capsys, tmp_path):
        image = ImageTensor(SpaceParams(2, 1, 2), (0, 0, 0, 0))
        path = tmp_path / "img.json"
        path.write_bytes(encode_image(image))
        code, out, _ = run_cli(capsys, "attack", "--image", str(path),
                               "--method", "findpert", "--radius", "2",
                               "--seed", "1")
        assert code == 0
        payload = json.loads(out)
        assert payload["l2_moved"] <= 2 + 2 * 2 * 1 / 4

    def test_failure_marker_exits_1(self, capsys, tmp_path):
        image = ImageTensor(SpaceParams(2, 1, 2), (0, 0, 0, 0))
        path = tmp_path / "img.json"
        path.write_bytes(encode_image(image))
        code, out, _ = run_cli(capsys, "attack", "--image", str(path),
                               "--method", "findpert", "--radius", "0.01",
                               "--seed", "1")
        assert code == 1
        assert json.loads(out)["result"] is None

    def test_malformed_image_exits_2(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{broken")
        code, _, err = run_cli(capsys, "attack", "--image", str(path),
                               "--norm", "0")
        assert code == 2 and "error" in err


class TestEstimate:
    def test_ci_covers_exact(self, capsys):
        code, out, _ = run_cli(capsys, "estimate", "--n", "3", "--h", "1",
                               "--b", "1", "--classifier", "sum", "--label",
                               "0", "--norm", "0", "--size", "1",
                               "--samples", "2000", "--seed", "11")
        assert code == 0
        payload = json.loads(out)
        report = payload["report"]
        from robustness_envelope import robustness as rb
        from robustness_envelope.classifiers import sum_classifier
        from robustness_envelope.image_space import PerturbationBudget
        exact = rb.class_robust_fraction(
            sum_classifier(SpaceParams(3, 1, 1)), 0, PerturbationBudget(0, 1))
        assert report["ci_lo"] <= float(exact.fraction) <= report["ci_hi"]

    def test_zero_samples_exits_2(self, capsys):
        code, _, err = run_cli(capsys, "estimate", "--n", "2", "--h", "1",
                               "--b", "1", "--norm", "0", "--size", "1",
                               "--samples", "0", "--seed", "1")
        assert code == 2 and "error" in err

    def test_seed_reproducibility_byte_identical(self, capsys):
        args = ("estimate", "--n", "2", "--h", "1", "--b", "1", "--norm", "0",
                "--size", "1", "--samples", "300", "--seed", "4")
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second

    def test_csv_format(self, capsys):
        code, out, _ = run_cli(capsys, "estimate", "--n", "2", "--h", "1",
                               "--b", "1", "--norm", "1", "--size", "1",
                               "--samples", "100", "--seed", "2",
                               "--format", "csv")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0][0] == "n" and rows[1][0] == "2"


class TestOutputFile:
    def test_writes_to_path(self, capsys, tmp_path):
        target = tmp_path / "table.csv"
        code, out, _ = run_cli(capsys, "bounds", "--r", "0.5", "--n", "4",
                               "--h", "1", "--b", "1", "--output", str(target))
        assert code == 0 and out == ""
        assert "upper_size" in target.read_text()
