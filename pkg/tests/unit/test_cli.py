"""Tests for the mp2s command line."""

import json

import pytest
from click.testing import CliRunner

from src.cli.main import cli, main, parse_automaton_spec
from src.utils.errors import InvalidParameterError


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(cli, ["--log-level", "WARNING", *args])


@pytest.fixture
def instance_files(tmp_path, runner):
    """Stream files for D(I1, I2) in the reversed layout."""

    def make(n, i1, i2=None):
        s, t = tmp_path / f"s_{i1}_{i2}.txt", tmp_path / f"t_{i1}_{i2}.txt"
        args = ["gen-instance", "--n", str(n), "--i1", i1, "--s-out", str(s), "--t-out", str(t)]
        if i2 is not None:
            args += ["--i2", i2]
        assert invoke(runner, *args).exit_code == 0
        return str(s), str(t)

    return make


class TestAutomatonSpec:
    """Resolving --automaton values."""

    @pytest.mark.parametrize(
        "spec,name",
        [
            ("builtin:trivial:3", "trivial:3"),
            ("builtin:sqrt:4", "sqrt:4"),
            ("builtin:crippled:4:1100", "crippled:4:1100"),
        ],
    )
    def test_builtins(self, spec, name):
        assert parse_automaton_spec(spec).name == name

    def test_random(self):
        a = parse_automaton_spec("builtin:random:2:3:1:1:5")
        assert (a.params.m, a.params.kf, a.params.kb) == (3, 1, 1)

    @pytest.mark.parametrize(
        "spec",
        ["builtin:sqrt", "builtin:sqrt:x", "builtin:nope:1", "crippled:4:1100", "builtin:crippled:4:110", "file:"],
    )
    def test_invalid(self, spec):
        with pytest.raises(InvalidParameterError):
            parse_automaton_spec(spec)


class TestSimulateAndOracle:
    """simulate, oracle and gen-instance."""

    def test_gen_instance_to_stdout(self, runner):
        result = invoke(runner, "gen-instance", "--n", "4", "--i1", "1,2")
        assert result.exit_code == 0
        assert "a1 a2 b3 b4\na4 a3 b2 b1\n" in result.output

    def test_gen_instance_pi_layout(self, runner):
        result = invoke(runner, "gen-instance", "--n", "6", "--i1", "100000", "--i2", "100000", "--layout", "pi:3")
        assert "b5 b6 b3 b4 a1 b2" in result.output

    def test_accepts_disjoint_instance(self, runner, instance_files):
        s, t = instance_files(4, "1100")
        result = invoke(runner, "simulate", "--automaton", "builtin:sqrt:4", "--s", s, "--t", t)
        assert result.exit_code == 0
        lines = result.output.splitlines()
        assert lines[0] == "accepted"
        assert lines[1].startswith("steps=")

    def test_rejects_intersecting_instance(self, runner, instance_files):
        s, t = instance_files(4, "1100", "1100")
        result = invoke(runner, "simulate", "--automaton", "builtin:sqrt:4", "--s", s, "--t", t)
        assert result.exit_code == 1
        assert result.output.splitlines()[0] == "rejected"

    def test_trace_file(self, runner, instance_files, tmp_path):
        s, t = instance_files(4, "0110")
        trace = tmp_path / "trace.jsonl"
        result = invoke(runner, "simulate", "--automaton", "builtin:trivial:4", "--s", s, "--t", t, "--trace", str(trace))
        assert result.exit_code == 0
        lines = trace.read_text().splitlines()
        steps = int(result.output.strip().split("steps=")[-1].split()[0])
        assert len(lines) == steps + 1
        assert json.loads(lines[0])["step"] == 1
        assert json.loads(lines[-1])["final"] is True

    def test_oracle(self, runner, instance_files):
        s, t = instance_files(4, "1010")
        disjoint = invoke(runner, "oracle", "--s", s, "--t", t)
        assert disjoint.exit_code == 0 and "disjoint" in disjoint.output
        s, t = instance_files(4, "1010", "1011")
        intersecting = invoke(runner, "oracle", "--s", s, "--t", t)
        assert intersecting.exit_code == 1 and "intersecting" in intersecting.output

    def test_bad_stream_file(self, runner, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("a1 zz\n")
        result = invoke(runner, "oracle", "--s", str(bad), "--t", str(bad))
        assert result.exit_code == 2
        assert "error:" in result.output

    def test_stall_is_a_runtime_error(self, runner, tmp_path, instance_files):
        table = tmp_path / "stay.mp2s"
        lines = ["mp2s n=1 m=1 kf=1 kb=0", "state p start accept"]
        for s_sym in ("a1", "b1", "end"):
            for t_sym in ("a1", "b1", "end"):
                lines.append(f"trans p {s_sym},{t_sym} -> p SS")
        table.write_text("\n".join(lines) + "\n")
        s, t = instance_files(1, "1")
        result = invoke(runner, "simulate", "--automaton", f"file:{table}", "--s", s, "--t", t)
        assert result.exit_code == 3


class TestSweeps:
    """exhaustive and fool."""

    def test_exhaustive_streams(self, runner, tmp_path):
        out = tmp_path / "report.json"
        result = invoke(runner, "exhaustive", "--automaton", "builtin:trivial:2", "--n", "2", "--out", str(out))
        assert result.exit_code == 0
        assert "verified 256/256" in result.output
        report = json.loads(out.read_text())
        assert report["total"] == 256
        assert report["falseAccepts"] == report["falseRejects"] == 0
        assert report["reachableStates"] >= 1
        assert report["family"] == "streams"

    def test_exhaustive_sampled(self, runner, tmp_path):
        out = tmp_path / "report.json"
        result = invoke(
            runner, "exhaustive", "--automaton", "builtin:sqrt:4", "--n", "4", "--enum", "sample:50:3", "--no-states", "--out", str(out)
        )
        assert result.exit_code == 0
        report = json.loads(out.read_text())
        assert report["enumeration"] == {"kind": "sample", "count": 50, "seed": 3}
        assert report["reachableStates"] is None

    def test_exhaustive_disagreement(self, runner, tmp_path):
        out = tmp_path / "report.json"
        result = invoke(
            runner, "exhaustive", "--automaton", "builtin:crippled:4:1100", "--n", "4", "--family", "subsets", "--out", str(out)
        )
        assert result.exit_code == 1
        assert json.loads(out.read_text())["falseAccepts"] > 0

    def test_exhaustive_too_large(self, runner):
        result = invoke(runner, "exhaustive", "--automaton", "builtin:trivial:5", "--n", "5")
        assert result.exit_code == 2

    def test_fool_finds_witness(self, runner, tmp_path):
        out = tmp_path / "fool.json"
        result = invoke(runner, "fool", "--automaton", "builtin:crippled:4:1100", "--n", "4", "--out", str(out))
        assert result.exit_code == 1
        report = json.loads(out.read_text())
        assert report["witness"]["I"] == []
        assert report["witness"]["Iprime"] == [3]
        assert report["witness"]["oracle"] is False
        assert report["bucketStats"]["runs"] == 16

    def test_fool_without_witness(self, runner, tmp_path):
        out = tmp_path / "fool.json"
        result = invoke(runner, "fool", "--automaton", "builtin:trivial:4", "--n", "4", "--out", str(out))
        assert result.exit_code == 0
        assert "no witness" in result.output
        assert json.loads(out.read_text())["witness"] is None

    def test_fool_reversed_layout_with_backward_heads(self, runner):
        result = invoke(runner, "fool", "--automaton", "builtin:random:4:2:1:1:0", "--n", "4")
        assert result.exit_code == 2


class TestBoundsCommands:
    """bounds and remarks."""

    def test_bounds_forward(self, runner):
        result = invoke(runner, "bounds", "--mode", "forward", "--n", "1024", "--kf", "1", "--log2m", "200")
        assert result.exit_code == 0
        assert "ruledOut=true margin=139.99" in result.output

    def test_bounds_report_file(self, runner, tmp_path):
        out = tmp_path / "bounds.json"
        result = invoke(runner, "bounds", "--mode", "general", "--n", "4096", "--kf", "1", "--kb", "1", "--m", "1024", "--out", str(out))
        assert result.exit_code == 0
        report = json.loads(out.read_text())
        assert report["ruledOut"] is True
        assert report["v"] == 9
        assert set(report) >= {"mode", "n", "m_log2", "kf", "kb", "k", "v", "lhs", "rhs", "ruledOut", "margin"}

    def test_bounds_needs_one_budget(self, runner):
        result = invoke(runner, "bounds", "--n", "1024", "--kf", "1")
        assert result.exit_code == 2

    def test_remarks(self, runner, tmp_path):
        out = tmp_path / "remarks.json"
        result = invoke(runner, "remarks", "--exponents", "12,20", "--kf", "1,2", "--root-exponents", "10,100", "--out", str(out))
        assert result.exit_code == 0
        report = json.loads(out.read_text())
        assert report["remark"]["violations"] == []
        assert report["rootHeads"]["ruledOutFrom"] == 100


class TestMain:
    """Exit codes from the non-raising entry point."""

    def test_success(self):
        assert main(["--log-level", "WARNING", "bounds", "--n", "1024", "--kf", "1", "--log2m", "200"]) == 0

    def test_bound_not_ruled_out_still_succeeds(self):
        assert main(["--log-level", "WARNING", "bounds", "--n", "1024", "--kf", "1", "--log2m", "300"]) == 0

    def test_usage_error(self):
        assert main(["no-such-command"]) == 2

    def test_library_error(self):
        assert main(["--log-level", "WARNING", "gen-instance", "--n", "4", "--i1", "1,9"]) == 2

    def test_malformed_setting_is_an_input_error(self, monkeypatch):
        monkeypatch.setenv("MP2S_DEFAULT_SEED", "seven")
        assert main(["--log-level", "WARNING", "bounds", "--n", "1024", "--kf", "1", "--log2m", "200"]) == 2

    def test_malformed_setting_through_the_group(self, runner, monkeypatch):
        monkeypatch.setenv("MP2S_EXHAUSTIVE_LIMIT", "many")
        result = invoke(runner, "bounds", "--n", "1024", "--kf", "1", "--log2m", "200")
        assert result.exit_code == 2
        assert "MP2S_EXHAUSTIVE_LIMIT" in result.output
