"""
Tests for the Command-Line Runner
=================================
"""

import csv
import io
import json
import math

import pytest

from retraction_kit.cli import (
    EXIT_CONFIG,
    EXIT_FAILURE,
    EXIT_OK,
    ExperimentConfig,
    execute,
    load_config_file,
    main,
)
from retraction_kit.exceptions import ConfigError, ExperimentError
from retraction_kit.models import ExperimentKind
from retraction_kit.reporting import data_lines


def _rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def _metadata(text):
    pairs = [line[2:].split(": ", 1) for line in text.splitlines() if line.startswith("# ")]
    return {key: value for key, value in pairs}


class TestRetractCommand:
    def test_newton_on_circle(self, capsys):
        code = main(
            ["retract", "--manifold", "circle", "--method", "newton", "--x", "1,0", "--v", "0,0.5"]
        )
        out = capsys.readouterr().out

        assert code == EXIT_OK
        rows = _rows(out)
        assert rows[0]["status"] == "CONVERGED"
        point = [float(p) for p in rows[0]["point"].split()]
        assert point == pytest.approx([0.894427191, 0.4472135955], abs=1e-6)
        assert _metadata(out)["tool"] == "retraction-kit"

    def test_several_methods(self, capsys):
        code = main(
            ["retract", "--method", "newton,orthographic,projective", "--x", "1,0", "--v", "0,0.5"]
        )
        rows = _rows(capsys.readouterr().out)

        assert code == EXIT_OK
        assert [row["method"] for row in rows] == ["newton", "orthographic", "projective"]

    def test_failed_retraction_exits_one(self, capsys):
        code = main(["retract", "--method", "orthographic", "--x", "1,0", "--v", "0,1.2"])
        rows = _rows(capsys.readouterr().out)

        assert code == EXIT_FAILURE
        assert rows[0]["status"] == "NO_CONVERGENCE"

    def test_oblique_with_angle(self, capsys):
        code = main(
            ["retract", "--method", "oblique", "--x", "1,0", "--v", "0,0.2", "--angle", "10"]
        )
        assert code == EXIT_OK
        assert _rows(capsys.readouterr().out)[0]["method"] == "oblique_control"


class TestConfigErrors:
    def test_unknown_manifold(self, capsys):
        assert main(["retract", "--manifold", "helix", "--v", "0,0.5"]) == EXIT_CONFIG

    def test_empty_method_list(self, capsys):
        assert main(["retract", "--method", "", "--x", "1,0", "--v", "0,0.5"]) == EXIT_CONFIG

    def test_unknown_method(self, capsys):
        code = main(["retract", "--method", "gradient", "--x", "1,0", "--v", "0,0.5"])
        assert code == EXIT_CONFIG

    def test_off_manifold_point(self, capsys):
        assert main(["retract", "--x", "1.5,0", "--v", "0,0.5"]) == EXIT_CONFIG

    def test_non_tangent_vector(self, capsys):
        assert main(["retract", "--x", "1,0", "--v", "0.5,0.5"]) == EXIT_CONFIG

    def test_seed_required_for_region(self, capsys):
        assert main(["region", "--manifold", "ellipse:2,1"]) == EXIT_CONFIG

    def test_nonpositive_threshold(self, capsys):
        assert main(["retract", "--x", "1,0", "--v", "0,0.5", "--c0", "0"]) == EXIT_CONFIG

    def test_short_ladder(self, capsys):
        assert main(["order", "--rungs", "3"]) == EXIT_CONFIG

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["--version"])
        assert exc_info.value.code == 0


class TestConfigFile:
    def test_flags_win_over_file(self, tmp_path, capsys):
        path = tmp_path / "order.json"
        path.write_text(
            json.dumps(
                {"experiment": "order", "manifold": "ellipse:2,1", "methods": ["projective"]},
                indent=2,
            )
        )
        code = main(["order", "--config", str(path), "--manifold", "circle"])
        out = capsys.readouterr().out

        assert code == EXIT_OK
        assert _metadata(out)["manifold"] == "circle"
        rows = _rows(out)
        assert rows[0]["method"] == "projective"
        assert float(rows[0]["slope"]) == pytest.approx(3.0, abs=0.1)

    def test_unknown_key_reports_line(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{\n  "experiment": "order",\n  "stepsize": 0.1\n}\n')
        data, lines = load_config_file(str(path))

        with pytest.raises(ConfigError) as exc_info:
            ExperimentConfig.from_dict(data, lines)
        assert exc_info.value.field == "stepsize"
        assert exc_info.value.line == 3

    def test_invalid_json_reports_line(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "experiment": "order",\n  "manifold": circle\n}\n')

        with pytest.raises(ConfigError) as exc_info:
            load_config_file(str(path))
        assert exc_info.value.line == 3

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config_file(str(tmp_path / "absent.json"))

    def test_unknown_key_exits_two(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{"experiment": "order", "stepsize": 0.1}')
        assert main(["order", "--config", str(path)]) == EXIT_CONFIG

    @pytest.mark.parametrize(
        "experiment, key, value",
        [
            ("retract", "c0", "tiny"),
            ("lemma", "seed", "seven"),
            ("retract", "methods", 5),
            ("region", "base_points", 2.5),
            ("lemma", "complement", "yes"),
            ("retract", "v", [0.0, "half"]),
        ],
    )
    def test_wrongly_typed_value_exits_two(self, tmp_path, capsys, experiment, key, value):
        path = tmp_path / "typed.json"
        path.write_text(
            json.dumps({"experiment": experiment, "v": [0.0, 0.5], "seed": 1, key: value}, indent=2)
        )
        data, lines = load_config_file(str(path))

        with pytest.raises(ConfigError) as exc_info:
            ExperimentConfig.from_dict(data, lines)
        assert exc_info.value.field == key
        assert exc_info.value.line == lines[key]
        assert main([experiment, "--config", str(path)]) == EXIT_CONFIG

    def test_numeric_values_are_converted(self):
        config = ExperimentConfig.from_dict(
            {"experiment": "lemma", "seed": 7.0, "trials": "20", "c0": 1, "complement": False}
        )
        assert config.seed == 7 and isinstance(config.seed, int)
        assert config.trials == 20
        assert config.c0 == 1.0 and isinstance(config.c0, float)
        assert config.complement is False

    def test_string_lists_are_parsed(self):
        config = ExperimentConfig.from_dict(
            {"experiment": "retract", "methods": "newton, projective", "x": "1,0", "v": "0,0.5"}
        )
        assert config.methods == ["newton", "projective"]
        assert config.x == [1.0, 0.0]
        assert config.experiment == ExperimentKind.RETRACT

    def test_empty_method_list_rejected(self):
        config = ExperimentConfig(experiment=ExperimentKind.RETRACT, methods=[], v=[0.0, 0.5])
        with pytest.raises(ConfigError) as exc_info:
            config.validate()
        assert exc_info.value.field == "methods"


class TestExperiments:
    def test_order_ellipse(self, capsys):
        code = main(["order", "--manifold", "ellipse:2,1", "--method", "newton,projective"])
        rows = _rows(capsys.readouterr().out)

        assert code == EXIT_OK
        assert all(float(row["slope"]) >= 2.8 for row in rows)

    def test_gap(self, capsys):
        code = main(["gap", "--manifold", "ellipse:2,1", "--t-max", "0.4", "--rungs", "6"])
        out = capsys.readouterr().out

        assert code == EXIT_OK
        assert float(_rows(out)[0]["slope"]) >= 3.8

    def test_geodesic_on_circle(self, capsys):
        code = main(["geodesic", "--x", "1,0", "--v", "0,1", "--n-steps", "100"])
        row = _rows(capsys.readouterr().out)[0]

        assert code == EXIT_OK
        assert float(row["analytic_error"]) <= 1e-8
        endpoint = [float(p) for p in row["endpoint"].split()]
        assert endpoint == pytest.approx([math.cos(1.0), math.sin(1.0)], abs=1e-8)

    def test_cost(self, capsys):
        code = main(["cost", "--manifold", "ellipse:2,1", "--samples", "30", "--seed", "2"])
        out = capsys.readouterr().out

        assert code == EXIT_OK
        assert [row["method"] for row in _rows(out)] == ["newton", "orthographic"]
        assert _metadata(out)["iteration_violations"] == "0"

    def test_cost_rejects_other_method_counts(self, capsys):
        code = main(
            ["cost", "--method", "projective,newton,orthographic", "--seed", "2", "--samples", "5"]
        )
        assert code == EXIT_CONFIG

    def test_cost_with_explicit_pair(self, capsys):
        code = main(
            ["cost", "--method", "newton,projective", "--seed", "2", "--samples", "10"]
        )
        rows = _rows(capsys.readouterr().out)

        assert code == EXIT_OK
        assert [row["method"] for row in rows] == ["newton", "projective"]

    def test_rates(self, capsys):
        code = main(["rates", "--manifold", "ellipse:2,1", "--method", "chord,mnr"])
        rows = _rows(capsys.readouterr().out)

        assert code == EXIT_OK
        assert [row["method"] for row in rows] == ["chord_orthographic", "modified_newton"]

    def test_rates_reject_newton(self, capsys):
        assert main(["rates", "--method", "newton"]) == EXIT_CONFIG

    def test_lemma(self, capsys):
        code = main(["lemma", "--trials", "300", "--seed", "1"])
        row = _rows(capsys.readouterr().out)[0]

        assert code == EXIT_OK
        assert row["violations"] == "0"
        assert row["complement"] == "true"

    def test_compare(self, capsys):
        code = main(
            [
                "compare", "--method", "newton,orthographic", "--seed", "0",
                "--base-points", "3", "--magnitudes", "0.5,1.5",
            ]
        )
        rows = _rows(capsys.readouterr().out)

        assert code == EXIT_OK
        assert [row["method"] for row in rows] == ["newton", "orthographic"]

    def test_unsupported_reference(self):
        config = ExperimentConfig(
            experiment=ExperimentKind.ORDER, manifold="ellipse:2,1", reference="analytic"
        )
        with pytest.raises(ExperimentError):
            execute(config)


class TestOutput:
    def _region(self, tmp_path, name, fmt="csv"):
        path = tmp_path / name
        code = main(
            [
                "region", "--manifold", "ellipse:2,1", "--method", "newton,orthographic",
                "--seed", "7", "--base-points", "4", "--magnitudes", "0.5,1.5,2.5",
                "--format", fmt, "-o", str(path),
            ]
        )
        assert code == EXIT_OK
        return path.read_text()

    def test_region_is_reproducible(self, tmp_path):
        first = self._region(tmp_path, "a.csv")
        second = self._region(tmp_path, "b.csv")

        assert data_lines(first) == data_lines(second)
        assert _metadata(first)["config_hash"] == _metadata(second)["config_hash"]

    def test_region_rows(self, tmp_path):
        rows = _rows(self._region(tmp_path, "region.csv"))

        assert [float(row["magnitude"]) for row in rows] == [0.5, 1.5, 2.5]
        assert all(row["cells"] == "8" for row in rows)
        assert all(
            int(row["newton_success"]) >= int(row["orthographic_success"]) for row in rows
        )

    def test_json_format(self, tmp_path):
        text = self._region(tmp_path, "region.json", fmt="json")
        document = json.loads(text)

        assert document["metadata"]["experiment"] == "region"
        assert document["metadata"]["seed"] == 7
        assert document["columns"][0] == "magnitude"
        assert len(document["rows"]) == 3
        assert data_lines(text, "json") == data_lines(
            self._region(tmp_path, "again.json", fmt="json"), "json"
        )

    def test_output_format_does_not_change_hash(self, tmp_path):
        csv_text = self._region(tmp_path, "h.csv")
        json_text = self._region(tmp_path, "h.json", fmt="json")
        json_hash = json.loads(json_text)["metadata"]["config_hash"]
        assert _metadata(csv_text)["config_hash"] == json_hash
