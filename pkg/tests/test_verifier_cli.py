# tests/test_verifier_cli.py
import csv
import json
import re

import pytest
from click.testing import CliRunner

from cli.main import cli
from common.config import get_config, reload_config
from common.errors import ConfigError, ConstraintError, DivergenceError, PoleError
from verifier.core import CheckGroup, CheckRecord, RunConfig, execute, format_number, parse_number, parse_params
from verifier.storage import RunHistory

QUIET = ["--log-level", "ERROR"]


def _invoke(*args):
    return CliRunner().invoke(cli, QUIET + list(args))


def _json(output: str) -> dict:
    return json.loads(output[output.index("{"):output.rindex("}") + 1])


class TestParsing:
    def test_real_params(self):
        assert parse_params("0.2,0.3,0.4,0.5") == (0.2, 0.3, 0.4, 0.5)

    def test_complex_params(self):
        assert parse_params("0.2,0.1;0.3") == (0.2 + 0.1j, 0.3)
        assert parse_params([0.2, "0.1,-1"]) == (0.2, 0.1 - 1j)
        assert parse_params(None) == ()

    def test_bad_number(self):
        with pytest.raises(ConfigError):
            parse_number("abc")

    def test_format_number(self):
        assert format_number(0.1) == "0.10000000000000001"
        assert format_number(complex(1.5, -2.0), digits=3) == "1.5,-2"
        assert format_number(complex(1.5, 0.0)) == "1.5"
        assert format_number(3) == "3"
        assert format_number(None) is None
        assert format_number({"a": [1.0, 2.5]}) == {"a": ["1", "2.5"]}


class TestRunConfig:
    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            RunConfig.from_mapping({"qq": 0.5})

    def test_yaml_overlay(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("family: big-hermite\nparams: [0.3]\nq: '0.4'\nn: 2\n")
        cfg = RunConfig.from_yaml(str(path))
        assert cfg.q == 0.4
        assert cfg.params == (0.3,)
        overlaid = RunConfig.from_mapping({"n": 3, "q": None}, cfg)
        assert overlaid.n == 3
        assert overlaid.q == 0.4

    def test_validation_collects_errors(self):
        cfg = RunConfig(command="gram", family="aw", q=1.5, params=(0.2,), tol=0.0)
        with pytest.raises(ConfigError) as excinfo:
            cfg.validate()
        errors = excinfo.value.details["errors"]
        assert len(errors) == 3

    def test_numbers_serialized_as_strings(self):
        data = RunConfig(q=0.1, alpha=1.5).to_dict()
        assert data["q"] == "0.10000000000000001"
        assert data["alpha"] == "1.5"
        assert data["tol"] is None
        assert RunConfig(tol=0.25).to_dict()["tol"] == "0.25"

    def test_default_tolerance_from_config(self):
        assert RunConfig().tolerance == get_config().numerics.eps_verify
        assert RunConfig(tol=1e-3).tolerance == 1e-3

    def test_timing_not_serialized(self):
        data = RunConfig(timing=True, record=True).to_dict()
        assert "timing" not in data
        assert "record" not in data


class TestRunner:
    def test_records_keep_group_order(self):
        groups = [
            CheckGroup(name, (lambda name=name: [CheckRecord(name, {}, 1.0, 1.0, 0.0, 1e-8)]))
            for name in ("first", "second", "third")
        ]
        report = execute(RunConfig(), groups)
        assert [c.name for c in report.checks] == ["first", "second", "third"]
        assert report.ok

    def test_numerical_failure_becomes_record(self):
        def run():
            raise PoleError("denominator vanished")

        report = execute(RunConfig(), [CheckGroup("pole", run)])
        assert not report.ok
        assert report.checks[0].error.startswith("PoleError")

    def test_constraint_error_propagates(self):
        def run():
            raise ConstraintError("bad parameter")

        with pytest.raises(ConstraintError):
            execute(RunConfig(command="eval"), [CheckGroup("constraint", run)])

    @pytest.mark.parametrize("error", [ConstraintError("bad parameter"), DivergenceError("sum diverges")])
    def test_suite_records_constraint_errors(self, error):
        def run():
            raise error

        groups = [CheckGroup("rejected", run), CheckGroup("ok", lambda: [CheckRecord("ok", {}, 1.0, 1.0, 0.0, 1e-8)])]
        report = execute(RunConfig(command="suite"), groups)
        assert [c.name for c in report.checks] == ["rejected", "ok"]
        assert report.checks[0].error.startswith(type(error).__name__)
        assert report.checks[1].passed
        assert not report.ok

    def test_tightened_group_caps_tolerance(self):
        records = [CheckRecord("a", {}, 1.0, 1.0, 1e-6, 1e-3), CheckRecord("b", {}, 1.0, 1.0, 0.0, 1e-9)]
        group = CheckGroup("loose", lambda: records)
        tightened = group.tightened(1e-8).run()
        assert [r.tol for r in tightened] == [1e-8, 1e-9]
        assert not tightened[0].passed
        assert records[0].tol == 1e-3

    def test_history_needs_database(self):
        with pytest.raises(ConfigError):
            RunHistory()


class TestCommands:
    def test_eval_hermite(self):
        result = _invoke("eval", "--family", "hermite", "--n", "1", "--z", "2", "--output", "json")
        assert result.exit_code == 0
        data = _json(result.output)
        assert data["checks"][0]["computed"] == "1.5"
        assert data["checks"][0]["pass"] is True
        assert data["meta"]["seed"] == 42
        assert "wall_time" not in data["summary"]

    def test_eval_two_representations(self):
        result = _invoke("eval", "--family", "aw", "--params", "0.2,0.3,0.4,0.5", "--n", "3", "--x", "0.4",
                         "--output", "json")
        assert result.exit_code == 0
        assert float(_json(result.output)["checks"][0]["defect"]) <= 1e-10

    def test_timing_adds_wall_time(self):
        result = _invoke("eval", "--n", "2", "--output", "json", "--timing")
        assert "wall_time" in _json(result.output)["summary"]

    def test_degree_bound_violation(self):
        result = _invoke("gram", "--family", "aw", "--params", "0.2,0.3,0.4,0.5", "--q", "0.3", "--max-degree", "3")
        assert result.exit_code == 2

    @pytest.mark.parametrize("args", [
        ["eval", "--q", "1.5"],
        ["eval", "--family", "wilson"],
        ["eval", "--family", "asc", "--params", "0.2"],
        ["cont-gram", "--alpha=-1"],
        ["qbeta", "--params", "0.2,0.3"],
    ])
    def test_invalid_configuration(self, args):
        assert _invoke(*args).exit_code == 2

    def test_json_is_deterministic(self):
        args = ("mass", "--params", "0.2,0.3,0.4,0.5", "--q", "0.5", "--output", "json")
        first, second = _invoke(*args), _invoke(*args)
        assert first.exit_code == 0
        assert _json(first.output) == _json(second.output)
        assert json.dumps(_json(first.output)) == json.dumps(_json(second.output))

    def test_csv_columns(self):
        result = _invoke("gram", "--family", "hermite", "--max-degree", "2", "--output", "csv")
        assert result.exit_code == 0
        lines = result.output.splitlines()
        start = lines.index("name,defect,tol,pass")
        rows = list(csv.reader(lines[start + 1:start + 7]))
        assert [row[0] for row in rows] == [
            "gram[0,0]", "gram[0,1]", "gram[0,2]", "gram[1,1]", "gram[1,2]", "gram[2,2]",
        ]
        assert all(row[3] == "true" for row in rows)

    def test_human_output(self):
        result = _invoke("jint", "--alpha", "1.0")
        assert result.exit_code == 0
        assert "jint" in result.output
        assert "passed" in result.output

    def test_suite_subset(self):
        result = _invoke("suite", "--only", "fourier,tconst", "--output", "json")
        assert result.exit_code == 0
        names = [c["name"] for c in _json(result.output)["checks"]]
        assert names and all(n.startswith(("fourier", "tconst")) for n in names)

    def test_suite_unknown_group(self):
        assert _invoke("suite", "--only", "nothing").exit_code == 2

    def test_suite_tol_caps_check_tolerances(self):
        assert _invoke("suite", "--only", "tconst").exit_code == 0
        tight = _invoke("suite", "--only", "tconst", "--tol", "1e-15", "--output", "json")
        assert tight.exit_code == 1
        checks = _json(tight.output)["checks"]
        assert checks and all(float(c["tol"]) <= 1e-15 for c in checks)

    def test_malformed_environment(self, monkeypatch):
        monkeypatch.setenv("QASKEY_QUAD_STEP", "fine")
        monkeypatch.setattr("common.config._config", None)
        assert _invoke("eval").exit_code == 2
        monkeypatch.delenv("QASKEY_QUAD_STEP")

    def test_version(self):
        result = _invoke("version")
        assert result.exit_code == 0
        assert "qaskey" in result.output

    def test_config_file(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("family: big-hermite\nparams: [0.3]\nn: 2\noutput: json\n")
        result = CliRunner().invoke(cli, QUIET + ["--config-file", str(path), "eval"])
        assert result.exit_code == 0
        assert _json(result.output)["meta"]["config"]["family"] == "big-hermite"


class TestHistory:
    def test_record_and_list(self, tmp_path, monkeypatch):
        monkeypatch.setenv("QASKEY_HISTORY_DB", str(tmp_path / "runs.db"))
        reload_config()

        recorded = _invoke("eval", "--n", "1", "--record")
        assert recorded.exit_code == 0
        run_id = re.search(r"recorded run (\w+)", recorded.output).group(1)

        listing = _invoke("history")
        assert listing.exit_code == 0
        assert "eval" in listing.output

        shown = _invoke("history", "--show", run_id)
        assert _json(shown.output)["meta"]["config"]["command"] == "eval"
        assert _invoke("history", "--show", "missing").exit_code == 1

    def test_history_disabled(self):
        assert _invoke("history").exit_code == 2
