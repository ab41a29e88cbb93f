"""Tests for the command-line entry point"""

import importlib.util
from pathlib import Path
from unittest.mock import patch

import pandas as pd
import pytest

from src.errors import ProtocolViolation

CLI_PATH = Path(__file__).parent.parent / "scripts" / "cli.py"
SMALL_INSTANCE = ["--T", "400", "--W", "10", "--K", "3", "--P", "2", "--rho", "0.02"]


def load_cli():
    spec = importlib.util.spec_from_file_location("dicod_cli", CLI_PATH)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


@pytest.fixture(scope="module")
def cli():
    return load_cli()


@pytest.fixture
def instance_dir(cli, tmp_path):
    out = tmp_path / "instance"
    assert cli.main(["generate", *SMALL_INSTANCE, "--seed", "7", "--out", str(out)]) == 0
    return out


class TestBound:
    def test_no_overlap_prints_m_squared(self, cli, capsys):
        assert cli.main(["bound", "--alpha", "0", "--m", "4"]) == 0
        assert capsys.readouterr().out.strip() == "16"

    def test_table(self, cli, capsys):
        assert cli.main(["bound", "--alpha", "0,0.01", "--m", "1,2,4"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "M,alpha,bound,expansion,hypothesis_holds"
        assert len(lines) == 1 + 2 * 3

    def test_missing_option(self, cli, capsys):
        assert cli.main(["bound", "--alpha", "0.01"]) == 1
        assert "--m" in capsys.readouterr().err

    def test_values_from_config_file(self, cli, capsys, tmp_path):
        config = tmp_path / "bound.conf"
        config.write_text("# no overlap\nalpha = 0\nm = 3\n")
        assert cli.main(["bound", "--config", str(config)]) == 0
        assert capsys.readouterr().out.strip() == "9"

    def test_flags_override_config_file(self, cli, capsys, tmp_path):
        config = tmp_path / "bound.conf"
        config.write_text("alpha=0\nm=3\n")
        assert cli.main(["bound", "--config", str(config), "--m", "2"]) == 0
        assert capsys.readouterr().out.strip() == "4"

    def test_unknown_config_key(self, cli, tmp_path):
        config = tmp_path / "bad.conf"
        config.write_text("alpha=0\nm=3\nworkers=2\n")
        assert cli.main(["bound", "--config", str(config)]) == 1


class TestGenerate:
    def test_same_seed_same_bytes(self, cli, tmp_path):
        outputs = []
        for name in ("a", "b"):
            out = tmp_path / name
            cli.main(["generate", *SMALL_INSTANCE, "--seed", "3", "--out", str(out)])
            outputs.append(out)
        for filename in ("signal.csc1", "dictionary.csc1", "code_true.csc1"):
            a = (outputs[0] / filename).read_bytes()
            b = (outputs[1] / filename).read_bytes()
            assert a[:4] == b"CSC1"
            assert a == b

    def test_invalid_instance(self, cli, tmp_path):
        argv = ["generate", "--T", "5", "--W", "10", "--out", str(tmp_path)]
        assert cli.main(argv) == 1

    def test_unknown_flag(self, cli):
        with pytest.raises(SystemExit) as exc:
            cli.main(["generate", "--frobnicate"])
        assert exc.value.code == 1

    @pytest.mark.parametrize("flag", ["--paper-scale", "--full-scale"])
    def test_full_size_flag(self, cli, tmp_path, flag):
        parser, _ = cli.build_parser()
        args = parser.parse_args(["generate", flag, "--seed", "4", "--out", str(tmp_path)])
        spec = cli.generation_spec(args)
        assert (spec.n_times, spec.width, spec.n_atoms, spec.n_channels) == (120000, 200, 25, 7)
        assert spec.seed == 4
        assert not spec.auto_reg


class TestSolve:
    def test_writes_trace_and_code(self, cli, instance_dir, tmp_path):
        trace = tmp_path / "trace.csv"
        code = tmp_path / "code.csv"
        argv = [
            "solve",
            "--signal", str(instance_dir / "signal.csc1"),
            "--dictionary", str(instance_dir / "dictionary.csc1"),
            "--solver", "greedy",
            "--reg", "0.5",
            "--log-every", "1",
            "--trace", str(trace),
            "--code", str(code),
        ]  # fmt: skip
        assert cli.main(argv) == 0
        frame = pd.read_csv(trace)
        assert list(frame.columns) == ["solver", "updates", "seconds", "cost"]
        assert (frame["cost"].diff().dropna() <= 1e-9).all()
        assert pd.read_csv(code).columns[0] == "t"

    def test_dicod_update_log(self, cli, instance_dir, tmp_path):
        log = tmp_path / "updates.csv"
        argv = [
            "solve",
            "--signal", str(instance_dir / "signal.csc1"),
            "--dictionary", str(instance_dir / "dictionary.csc1"),
            "--solver", "dicod",
            "--workers", "2",
            "--reg", "0.5",
            "--trace", str(tmp_path / "trace.csv"),
            "--update-log", str(log),
        ]  # fmt: skip
        assert cli.main(argv) == 0
        frame = pd.read_csv(log)
        assert set(frame["worker"]) <= {0, 1}

    def test_update_log_needs_dicod(self, cli, instance_dir, tmp_path):
        argv = [
            "solve",
            "--signal", str(instance_dir / "signal.csc1"),
            "--dictionary", str(instance_dir / "dictionary.csc1"),
            "--trace", str(tmp_path / "trace.csv"),
            "--update-log", str(tmp_path / "updates.csv"),
        ]  # fmt: skip
        assert cli.main(argv) == 1

    def test_missing_inputs(self, cli):
        assert cli.main(["solve", "--solver", "greedy"]) == 1

    def test_unreadable_signal(self, cli, instance_dir, tmp_path):
        bogus = tmp_path / "bogus.csc1"
        bogus.write_bytes(b"NOPE")
        dictionary = str(instance_dir / "dictionary.csc1")
        argv = ["solve", "--signal", str(bogus), "--dictionary", dictionary]
        assert cli.main(argv) == 1

    def test_protocol_violation_exit_status(self, cli, instance_dir, capsys):
        argv = [
            "solve",
            "--signal", str(instance_dir / "signal.csc1"),
            "--dictionary", str(instance_dir / "dictionary.csc1"),
            "--solver", "dicod",
        ]  # fmt: skip
        with patch.object(cli, "run_solver", side_effect=ProtocolViolation("bad neighbor")):
            assert cli.main(argv) == 2
        assert "bad neighbor" in capsys.readouterr().err


class TestBenchAndCheck:
    def test_compare(self, cli, tmp_path, capsys):
        out = tmp_path / "trace.csv"
        svg = tmp_path / "trace.svg"
        argv = [
            "bench", "compare", *SMALL_INSTANCE,
            "--solvers", "greedy,seq-dicod,dicod",
            "--log-every", "5",
            "--out", str(out),
            "--svg", str(svg),
        ]  # fmt: skip
        assert cli.main(argv) == 0
        frame = pd.read_csv(out)
        assert set(frame["solver"]) == {"greedy", "seq-dicod", "dicod"}
        assert svg.read_text().startswith("<svg")
        assert "greedy" in capsys.readouterr().out

    def test_check_h1(self, cli, instance_dir, capsys):
        argv = ["check", "h1", "--dictionary", str(instance_dir / "dictionary.csc1")]
        assert cli.main(argv) == 0
        assert capsys.readouterr().out.startswith("H1 holds")
