"""JSON interchange for instances and representations.

Instance files:      {"epsilon": "1", "layers": [[w, ...], ...],
                      "up_neighbors": [[[k, l] | null, ...], ...]}
Representation files: {"epsilon": "1", "x": [["i,j", "p/q"], ...]}

Widths, coordinates and epsilon are written as exact rational strings
("3", "7/2"); decimal strings and plain JSON numbers are accepted on input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .model import (
    InvalidInstanceError,
    LayeredGraph,
    Representation,
    VertexId,
    as_fraction,
    build_graph,
)


@dataclass(frozen=True)
class Instance:
    """A layered graph together with its contact threshold."""

    graph: LayeredGraph
    epsilon: Fraction


def _format(value: Fraction) -> str:
    return str(value)


def _read_json(path: str | Path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInstanceError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInstanceError(
            f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, dict):
        raise InvalidInstanceError(f"{path}: top-level value must be an object")
    return data


def load_instance(path: str | Path) -> Instance:
    """Load an instance file; epsilon defaults to 1 when absent."""
    data = _read_json(path)
    if "layers" not in data:
        raise InvalidInstanceError(f"{path}: missing required field 'layers'")
    try:
        graph = build_graph(data["layers"], data.get("up_neighbors"))
        epsilon = as_fraction(data.get("epsilon", 1))
    except InvalidInstanceError as exc:
        raise InvalidInstanceError(f"{path}: {exc}") from exc
    return Instance(graph=graph, epsilon=epsilon)


def instance_to_dict(instance: Instance) -> dict:
    g = instance.graph
    return {
        "epsilon": _format(instance.epsilon),
        "layers": [[_format(w) for w in row] for row in g.widths],
        "up_neighbors": [
            [list(entry) if entry is not None else None for entry in row]
            for row in g.up_neighbors[:-1]
        ],
    }


def save_instance(path: str | Path, instance: Instance) -> None:
    Path(path).write_text(
        json.dumps(instance_to_dict(instance), indent=2) + "\n", encoding="utf-8"
    )


def representation_to_dict(r: Representation) -> dict:
    pairs = sorted(r.x.items())
    return {
        "epsilon": _format(r.epsilon),
        "x": [[f"{v.layer},{v.pos}", _format(x)] for v, x in pairs],
    }


def save_representation(path: str | Path, r: Representation) -> None:
    Path(path).write_text(
        json.dumps(representation_to_dict(r), indent=2) + "\n", encoding="utf-8"
    )


def load_representation(path: str | Path) -> Representation:
    data = _read_json(path)
    if "x" not in data:
        raise InvalidInstanceError(f"{path}: missing required field 'x'")
    x: dict[VertexId, Fraction] = {}
    for entry in data["x"]:
        if not (isinstance(entry, list) and len(entry) == 2):
            raise InvalidInstanceError(f"{path}: bad coordinate entry {entry!r}")
        key, value = entry
        try:
            layer_text, pos_text = str(key).split(",")
            vertex = VertexId(int(layer_text), int(pos_text))
        except ValueError as exc:
            raise InvalidInstanceError(f"{path}: bad vertex key {key!r}") from exc
        if vertex in x:
            raise InvalidInstanceError(f"{path}: duplicate coordinate for {vertex}")
        x[vertex] = as_fraction(value)
    return Representation(x=x, epsilon=as_fraction(data.get("epsilon", 1)))
