"""Round-trip and error-context tests for the JSON file formats."""

from __future__ import annotations

from fractions import Fraction

import pytest

from layercloud.io import (
    Instance,
    load_instance,
    load_representation,
    save_instance,
    save_representation,
)
from layercloud.model import (
    InvalidInstanceError,
    Representation,
    VertexId,
    build_graph,
    validate_graph,
)


class TestInstanceFiles:
    def test_round_trip(self, tmp_path):
        g = build_graph([["3/2", 2], [1, 1, 1]], [[[0, 1], [1, 2]]])
        path = tmp_path / "instance.json"
        save_instance(path, Instance(graph=g, epsilon=Fraction(1, 2)))
        loaded = load_instance(path)
        assert loaded.graph == g
        assert loaded.epsilon == Fraction(1, 2)

    def test_epsilon_defaults_to_one(self, tmp_path):
        path = tmp_path / "instance.json"
        path.write_text('{"layers": [[1]], "up_neighbors": []}')
        assert load_instance(path).epsilon == 1

    def test_decimal_and_rational_strings(self, tmp_path):
        path = tmp_path / "instance.json"
        path.write_text('{"epsilon": "0.5", "layers": [["7/2"]], "up_neighbors": []}')
        inst = load_instance(path)
        assert inst.epsilon == Fraction(1, 2)
        assert inst.graph.width(VertexId(0, 0)) == Fraction(7, 2)

    def test_parse_error_carries_line_context(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"layers": [[1]\n  "up_neighbors": []}')
        with pytest.raises(InvalidInstanceError) as err:
            load_instance(path)
        assert "line" in str(err.value)

    def test_missing_layers_field(self, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text("{}")
        with pytest.raises(InvalidInstanceError):
            load_instance(path)

    def test_loaded_instance_validates(self, tmp_path):
        path = tmp_path / "instance.json"
        path.write_text('{"layers": [[3], [1, 1, 1]], "up_neighbors": [[[0, 2]]]}')
        assert validate_graph(load_instance(path).graph) == []


class TestRepresentationFiles:
    def test_round_trip(self, tmp_path):
        r = Representation(
            x={VertexId(0, 0): Fraction(0), VertexId(1, 0): Fraction(3, 2)},
            epsilon=Fraction(1),
        )
        path = tmp_path / "rep.json"
        save_representation(path, r)
        assert load_representation(path) == r

    def test_duplicate_vertex_rejected(self, tmp_path):
        path = tmp_path / "rep.json"
        path.write_text('{"epsilon": "1", "x": [["0,0", "0"], ["0,0", "1"]]}')
        with pytest.raises(InvalidInstanceError):
            load_representation(path)

    def test_bad_vertex_key_rejected(self, tmp_path):
        path = tmp_path / "rep.json"
        path.write_text('{"epsilon": "1", "x": [["zero", "0"]]}')
        with pytest.raises(InvalidInstanceError):
            load_representation(path)
