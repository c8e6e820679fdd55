"""
Tests for Result Tables
=======================
"""

import io
import json

import numpy as np

from retraction_kit.models import Status
from retraction_kit.reporting import (
    build_metadata,
    canonical_json_bytes,
    config_hash,
    data_lines,
    format_cell,
    write_table,
)


class TestHashing:
    def test_canonical_bytes_ignore_key_order(self):
        assert canonical_json_bytes({"b": 1, "a": [1.5, 2]}) == b'{"a":[1.5,2],"b":1}'
        assert canonical_json_bytes({"a": [1.5, 2], "b": 1}) == b'{"a":[1.5,2],"b":1}'

    def test_numpy_values_hash_like_plain_values(self):
        assert config_hash({"x": np.array([1.0, 0.0])}) == config_hash({"x": [1.0, 0.0]})

    def test_different_configs_differ(self):
        assert config_hash({"seed": 1}) != config_hash({"seed": 2})


class TestFormatCell:
    def test_values(self):
        assert format_cell(0.1) == "0.1"
        assert format_cell(np.float64(1e-12)) == "1e-12"
        assert format_cell(True) == "true"
        assert format_cell(None) == ""
        assert format_cell(np.array([0.5, 2.0])) == "0.5 2.0"
        assert format_cell(Status.CONVERGED) == "CONVERGED"


class TestWriteTable:
    def _metadata(self):
        return build_metadata("retract", "circle", {"seed": None}, "1.0.0", summary={"slope": 3.0})

    def test_csv(self):
        stream = io.StringIO()
        text = write_table(self._metadata(), ["method", "iterations"], [
            {"method": "newton", "iterations": 4},
        ], stream=stream)

        assert stream.getvalue() == text
        lines = text.splitlines()
        assert lines[0] == "# tool: retraction-kit"
        assert "# slope: 3.0" in lines
        assert data_lines(text) == ["method,iterations", "newton,4"]

    def test_json(self, tmp_path):
        path = tmp_path / "out.json"
        rows = [{"method": "newton"}]
        write_table(self._metadata(), ["method"], rows, fmt="json", path=str(path))
        document = json.loads(path.read_text())

        assert document["metadata"]["experiment"] == "retract"
        assert document["rows"] == [{"method": "newton"}]
        assert "generated_at" not in data_lines(path.read_text(), "json")[0]
