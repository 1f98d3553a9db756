"""Command-line interface tests, run in-process through main(argv)."""

import json

import numpy as np
import pytest

from gausscap.channels import (
    GaussianChannel,
    NoiseParams,
    block_form_channel,
    channel_to_json,
)
from gausscap.cli import (
    EXIT_ENSEMBLE,
    EXIT_INPUT,
    EXIT_OK,
    EXIT_UNPHYSICAL,
    EXIT_USAGE,
    eval_rule,
    main,
)

G4 = 3.6096404744368116   # 5 log2 5 - 4 log2 4


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as err:   # argparse usage failures
        code = err.code
    out = capsys.readouterr().out
    return code, out


def write_channel(path, ch):
    path.write_text(channel_to_json(ch))
    return str(path)


class TestCapacity:
    def test_identity_mode_uniform(self, capsys):
        code, out = run(capsys, "capacity", "--lambdas", "1.0", "--power",
                        "1", "--method", "holevo", "--alloc", "uniform")
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["bits"] == pytest.approx(2.0, abs=1e-12)
        assert report["allocation"] == [1.0]

    def test_default_waterfill_single_mode(self, capsys):
        code, out = run(capsys, "capacity", "--lambdas", "0.5", "--power",
                        "1")
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["bits"] == pytest.approx(1.3774437510817343, abs=1e-9)
        assert report["mu"] is not None

    def test_lambda_rule_waterfills_every_mode(self, capsys):
        code, out = run(capsys, "capacity", "--lambdas-rule", "0.2+0.7*k/N",
                        "--N", "15", "--power", "15", "--method", "holevo",
                        "--alloc", "waterfill")
        assert code == EXIT_OK
        report = json.loads(out)
        assert len(report["allocation"]) == 15
        assert all(p > 0 for p in report["allocation"])

    def test_channel_file(self, capsys, tmp_path):
        path = write_channel(tmp_path / "loss.json",
                             block_form_channel(np.array([[np.sqrt(0.49)]])))
        code, out = run(capsys, "capacity", "--channel", path, "--power",
                        "10", "--method", "holevo", "--alloc", "uniform")
        assert code == EXIT_OK
        assert json.loads(out)["bits"] == pytest.approx(3.873587660182979,
                                                        abs=1e-12)

    def test_unphysical_channel_file(self, capsys, tmp_path):
        bad = GaussianChannel(2.0 * np.eye(2), np.zeros((2, 2)),
                              NoiseParams())
        path = write_channel(tmp_path / "bad.json", bad)
        code, _ = run(capsys, "capacity", "--channel", path, "--power", "1",
                      "--alloc", "uniform")
        assert code == EXIT_UNPHYSICAL

    def test_missing_channel_file(self, capsys, tmp_path):
        code, _ = run(capsys, "capacity", "--channel",
                      str(tmp_path / "nope.json"), "--power", "1")
        assert code == EXIT_INPUT

    def test_classical_needs_noise(self, capsys):
        code, _ = run(capsys, "capacity", "--lambdas", "1.0", "--power", "3",
                      "--method", "classical")
        assert code == EXIT_UNPHYSICAL

    def test_classical_with_noise(self, capsys):
        code, out = run(capsys, "capacity", "--lambdas", "1.0", "--xi", "1.0",
                        "--power", "3", "--method", "classical")
        assert code == EXIT_OK
        assert json.loads(out)["bits"] == pytest.approx(2.0, abs=1e-12)


class TestSweepModes:
    def test_golden_rows(self, capsys):
        code, out = run(capsys, "sweep-modes", "--N-range", "1..3", "--power",
                        "4", "--methods", "holevo,het", "--allocs",
                        "waterfill")
        assert code == EXIT_OK
        lines = out.strip().split("\n")
        assert lines[0] == "N,method,alloc,bits"
        assert lines[1] == "1,holevo,waterfill,3.60964047444"
        assert lines[2] == "1,het,waterfill,2.32192809489"
        assert len(lines) == 7

    def test_identity_het_converges_upward(self, capsys):
        code, out = run(capsys, "sweep-modes", "--N-range", "1..64",
                        "--power", "15", "--methods", "het", "--allocs",
                        "uniform")
        assert code == EXIT_OK
        bits = [float(line.split(",")[-1])
                for line in out.strip().split("\n")[1:]]
        assert all(b < a for a, b in zip(bits[1:], bits))  # increasing
        assert bits[-1] < 15.0 / np.log(2.0)

    def test_unknown_method_rejected(self, capsys):
        code, _ = run(capsys, "sweep-modes", "--N-range", "1..2", "--power",
                      "1", "--methods", "holevo,telepathy")
        assert code == EXIT_INPUT


class TestRandom:
    def test_analytic_golden_row(self, capsys):
        code, out = run(capsys, "random", "--N", "1", "--mode", "analytic",
                        "--power", "15", "--method", "het")
        assert code == EXIT_OK
        lines = out.strip().split("\n")
        assert lines[0] == "N,K,M,sigma2,method,mode,bits,stderr"
        assert lines[1] == "1,1,1,0,het,analytic,2.82397162578,"

    def test_mc_needs_seed(self, capsys):
        code, _ = run(capsys, "random", "--N", "1", "--mode", "mc",
                      "--samples", "50", "--power", "5")
        assert code == EXIT_USAGE

    def test_mc_row_carries_stderr(self, capsys):
        code, out = run(capsys, "random", "--N", "1", "--mode", "mc",
                        "--samples", "100", "--seed", "3", "--power", "5")
        assert code == EXIT_OK
        row = out.strip().split("\n")[1].split(",")
        assert float(row[7]) > 0

    def test_mc_deterministic(self, capsys):
        args = ("random", "--N", "1..3", "--K", "N", "--M", "N", "--sigma2",
                "0.05", "--mode", "mc", "--samples", "60", "--seed", "12",
                "--power", "5", "--method", "hom")
        _, first = run(capsys, *args)
        _, second = run(capsys, *args)
        assert first == second

    def test_rule_expressions(self, capsys):
        code, out = run(capsys, "random", "--N", "2..3", "--K", "1", "--M",
                        "2*N", "--mode", "analytic", "--power", "5")
        assert code == EXIT_OK
        rows = [line.split(",") for line in out.strip().split("\n")[1:]]
        assert [r[:3] for r in rows] == [["2", "1", "4"], ["3", "1", "6"]]

    def test_rule_rejects_arbitrary_code(self, capsys):
        code, _ = run(capsys, "random", "--N", "2", "--K",
                      "__import__('os').getpid()", "--mode", "analytic",
                      "--power", "1")
        assert code == EXIT_INPUT

    def test_insufficient_environment(self, capsys):
        code, _ = run(capsys, "random", "--N", "1", "--K", "3", "--M", "1",
                      "--mode", "analytic", "--power", "1")
        assert code == EXIT_ENSEMBLE

    def test_dump_needs_mc(self, capsys, tmp_path):
        code, _ = run(capsys, "random", "--N", "1", "--mode", "analytic",
                      "--power", "1", "--dump-samples",
                      str(tmp_path / "s.csv"))
        assert code == EXIT_USAGE

    def test_dump_needs_single_configuration(self, capsys, tmp_path):
        code, _ = run(capsys, "random", "--N", "1..2", "--mode", "mc",
                      "--seed", "1", "--samples", "10", "--power", "1",
                      "--dump-samples", str(tmp_path / "s.csv"))
        assert code == EXIT_USAGE


class TestDensity:
    def test_uniform_density(self, capsys):
        code, out = run(capsys, "density", "--N", "1", "--K", "1", "--M", "1",
                        "--grid", "5")
        assert code == EXIT_OK
        lines = out.strip().split("\n")
        assert lines[0] == "lambda,p_lambda"
        assert len(lines) == 6
        assert all(line.split(",")[1] == "1" for line in lines[1:])

    def test_grid_integral_close_to_one(self, capsys):
        code, out = run(capsys, "density", "--N", "2", "--K", "1", "--M", "2",
                        "--grid", "1001")
        assert code == EXIT_OK
        rows = np.array([[float(v) for v in line.split(",")]
                         for line in out.strip().split("\n")[1:]])
        integral = np.trapezoid(rows[:, 1], rows[:, 0])
        assert integral == pytest.approx(1.0, abs=1e-3)
        # a = b = 1 here, so the law is symmetric about 1/2
        assert np.allclose(rows[:, 1], rows[::-1, 1], atol=1e-9)

    def test_environment_too_small(self, capsys):
        code, _ = run(capsys, "density", "--N", "1", "--K", "2", "--M", "1")
        assert code == EXIT_ENSEMBLE


class TestPlumbing:
    def test_config_file_defaults_and_flag_override(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"power": 5.0, "method": "het"}))
        code, out = run(capsys, "capacity", "--lambdas", "1.0", "--config",
                        str(cfg))
        assert code == EXIT_OK
        assert json.loads(out)["method"] == "het"
        # explicit flag beats the config value
        code, out = run(capsys, "capacity", "--lambdas", "1.0", "--config",
                        str(cfg), "--method", "holevo", "--alloc", "uniform")
        assert json.loads(out)["bits"] == pytest.approx(
            6.0 * np.log2(6.0) - 5.0 * np.log2(5.0), abs=1e-9)

    def test_output_file(self, capsys, tmp_path):
        dest = tmp_path / "out.csv"
        code, out = run(capsys, "density", "--N", "1", "--K", "1", "--M", "1",
                        "--grid", "3", "--output", str(dest))
        assert code == EXIT_OK
        assert out == ""
        assert dest.read_text().startswith("lambda,p_lambda\n")

    def test_unknown_flag_is_usage_error(self, capsys):
        code, _ = run(capsys, "capacity", "--lambdas", "1.0", "--power", "1",
                      "--frobnicate")
        assert code == EXIT_USAGE

    def test_help_exits_zero(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["--help"])
        assert err.value.code == 0

    def test_missing_power_is_usage_error(self, capsys):
        code, _ = run(capsys, "capacity", "--lambdas", "1.0")
        assert code == EXIT_USAGE


class TestEvalRule:
    def test_arithmetic(self):
        assert eval_rule("0.2+0.7*k/N", k=1, N=2) == pytest.approx(0.55)
        assert eval_rule("2*N", N=3) == 6

    def test_rejects_names_and_calls(self):
        with pytest.raises(ValueError):
            eval_rule("open('x')")
        with pytest.raises(ValueError):
            eval_rule("k**N", k=2, N=3)
        with pytest.raises(ValueError):
            eval_rule("q+1", k=1, N=2)
