"""Random valid instance generation.

Adjacent layers are triangulated by a random monotone merge of the two row
paths: a shuffled sequence of "advance upper" / "advance lower" steps yields
contiguous neighbor intervals that share exactly one endpoint, so the output
always passes `validate_graph`.
"""

from __future__ import annotations

import random

from .model import LayeredGraph, build_graph


def gen_random_instance(
    num_layers: int,
    layer_sizes: list[int],
    width_range: tuple[int, int] = (1, 5),
    seed: int = 0,
) -> LayeredGraph:
    """Deterministically generate a valid instance for the given seed."""
    if num_layers < 1:
        raise ValueError("num_layers must be at least 1")
    if len(layer_sizes) != num_layers:
        raise ValueError(f"expected {num_layers} layer sizes, got {len(layer_sizes)}")
    if any(size < 1 for size in layer_sizes):
        raise ValueError("every layer needs at least one vertex")
    lo, hi = width_range
    if not (isinstance(lo, int) and isinstance(hi, int) and 1 <= lo <= hi):
        raise ValueError(f"bad width range {width_range!r}")
    rng = random.Random(seed)
    layers = [[rng.randint(lo, hi) for _ in range(size)] for size in layer_sizes]
    up_neighbors = [
        _random_strip(layer_sizes[i], layer_sizes[i + 1], rng)
        for i in range(num_layers - 1)
    ]
    return build_graph(layers, up_neighbors)


def _random_strip(lower: int, upper: int, rng: random.Random) -> list[list[int]]:
    """Neighbor intervals for one triangulated strip via a monotone merge."""
    moves = ["L"] * (lower - 1) + ["U"] * (upper - 1)
    rng.shuffle(moves)
    intervals: list[list[int]] = []
    start = 0
    top = 0
    for move in moves:
        if move == "U":
            top += 1
        else:
            intervals.append([start, top])
            start = top
    intervals.append([start, upper - 1])
    return intervals


def random_layer_sizes(
    num_layers: int, max_total: int, rng: random.Random
) -> list[int]:
    """Layer sizes (each >= 1) whose sum stays within ``max_total``."""
    if max_total < num_layers:
        raise ValueError("max_total smaller than the number of layers")
    sizes = [1] * num_layers
    budget = rng.randint(0, max_total - num_layers)
    for _ in range(budget):
        sizes[rng.randrange(num_layers)] += 1
    return sizes
