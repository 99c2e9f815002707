"""Independent brute-force ground truth for small integer-width instances.

Two mechanisms per objective keep each other honest:

* grid search: depth-first enumeration of integer x-assignments in row-major
  vertex order, with value-safe pruning only (a bound can only discard
  assignments that cannot beat the incumbent);
* a combinatorial route: realized-edge subsets checked through difference
  constraints for contact maximization, and gap-vector compositions with
  rigid-row offset alignment for gap minimization.

Both operate on exact integers, so reported optima are exact.  Contact
maximization searches the window [0, total width]; gap minimization, like the
flow solver it certifies, works inside the strip of width w_max * K.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .model import (
    Edge,
    LayeredGraph,
    Representation,
    StripInfeasibleError,
    VertexId,
    false_adjacency_pairs,
    validate_graph,
)


class OracleCapError(ValueError):
    """Raised when an instance exceeds the configured brute-force caps."""


@dataclass(frozen=True)
class GridSearchConfig:
    """Caps for the brute-force searches; only integer data is accepted."""

    max_rectangles: int = 10
    epsilon: int = 1


def _check_caps(g: LayeredGraph, cfg: GridSearchConfig) -> None:
    if validate_graph(g):
        raise OracleCapError("instance does not pass validate_graph")
    if g.num_vertices > cfg.max_rectangles:
        raise OracleCapError(
            f"instance has {g.num_vertices} rectangles, cap is {cfg.max_rectangles}"
        )
    if any(w.denominator != 1 for row in g.widths for w in row):
        raise OracleCapError("brute force accepts integer widths only")
    if Fraction(cfg.epsilon).denominator != 1 or cfg.epsilon < 1:
        raise OracleCapError("brute force accepts positive integer epsilon only")


def _row_major(g: LayeredGraph) -> list[VertexId]:
    return list(g.vertices())


def _processing_order(g: LayeredGraph) -> list[int]:
    """Layers ordered smallest-first while staying a contiguous band.

    Each layer after the first is placed next to an already-processed one, so
    every vertex can be checked against a full neighboring row the moment it
    is placed, which is what makes the search prune well.
    """
    sizes = [g.layer_size(i) for i in range(g.num_layers)]
    start = min(range(g.num_layers), key=lambda i: (sizes[i], i))
    lo = hi = start
    order = [start]
    while len(order) < g.num_layers:
        candidates = []
        if lo > 0:
            candidates.append(lo - 1)
        if hi < g.num_layers - 1:
            candidates.append(hi + 1)
        nxt = min(candidates, key=lambda i: (sizes[i], i))
        order.append(nxt)
        lo = min(lo, nxt)
        hi = max(hi, nxt)
    return order


class _GridSearch:
    """Shared state for the depth-first search over integer positions.

    Vertices are visited row by row in processing order, left to right within
    a row.  The search only considers canonical layouts (some row starts at
    x = 0); every shift class contains one, so no optimum is missed.
    """

    def __init__(self, g: LayeredGraph, epsilon: int, max_position: int,
                 allow_false_adjacencies: bool) -> None:
        self.g = g
        self.eps = epsilon
        self.layer_order = _processing_order(g)
        self.order = [
            VertexId(i, j) for i in self.layer_order for j in range(g.layer_size(i))
        ]
        self.widths = {v: int(g.width(v)) for v in self.order}
        self.allow_false = allow_false_adjacencies
        self.max_position = max_position
        # Widths still owed to the right of each vertex on its own row.
        self.row_rest: dict[VertexId, int] = {}
        for v in self.order:
            rest = sum(
                self.widths[VertexId(v.layer, j)]
                for j in range(v.pos + 1, g.layer_size(v.layer))
            )
            self.row_rest[v] = rest
        adjacent = set(g.vertical_edges())
        # The single already-placed neighboring row of each layer, if any, and
        # each vertex's neighbor interval on it.
        self.check_row: dict[int, int | None] = {}
        seen: set[int] = set()
        for layer in self.layer_order:
            near = [r for r in (layer - 1, layer + 1) if r in seen]
            self.check_row[layer] = near[0] if near else None
            seen.add(layer)
        self.check_interval: dict[VertexId, tuple[int, int] | None] = {}
        for v in self.order:
            row = self.check_row[v.layer]
            if row is None:
                self.check_interval[v] = None
            elif row == v.layer - 1:
                self.check_interval[v] = g.down_interval(v)
            else:
                self.check_interval[v] = g.up_interval(v)
        self.adjacent_either = adjacent | {(b, a) for a, b in adjacent}
        # Valid layouts preserve the embedding's cross-layer order: each
        # nearest forbidden pair keeps its side.  Collect, per vertex, the
        # placed-row partners it must stay right of / left of.
        f_left, f_right = false_adjacency_pairs(g)
        self.side_right_of: dict[VertexId, list[VertexId]] = {}
        self.side_left_of: dict[VertexId, list[VertexId]] = {}
        for a, b in sorted(f_left):  # b lies entirely left of a
            self._add_side(a, right_of=b)
            self._add_side(b, left_of=a)
        for a, b in sorted(f_right):  # a lies entirely left of b
            self._add_side(a, left_of=b)
            self._add_side(b, right_of=a)
        self.x: dict[VertexId, int] = {}

    def _add_side(self, v: VertexId, right_of: VertexId | None = None,
                  left_of: VertexId | None = None) -> None:
        z = right_of if right_of is not None else left_of
        if self.check_row[v.layer] != z.layer:
            return
        if right_of is not None:
            self.side_right_of.setdefault(v, []).append(z)
        else:
            self.side_left_of.setdefault(v, []).append(z)

    def hits_false_adjacency(self, v: VertexId, x: int) -> bool:
        if self.allow_false:
            return False
        row = self.check_row[v.layer]
        if row is None:
            return False
        right = x + self.widths[v]
        for z in self.side_right_of.get(v, ()):
            if x < self.x[z] + self.widths[z]:
                return True
        for z in self.side_left_of.get(v, ()):
            if right > self.x[z]:
                return True
        for j in range(self.g.layer_size(row)):
            u = VertexId(row, j)
            xu = self.x[u]
            overlap = min(right, xu + self.widths[u]) - max(x, xu)
            if overlap > 0 and (u, v) not in self.adjacent_either:
                return True
        return False

    def vertical_gain(self, v: VertexId, x: int) -> int:
        interval = self.check_interval[v]
        if interval is None:
            return 0
        row = self.check_row[v.layer]
        right = x + self.widths[v]
        gained = 0
        for j in range(interval[0], interval[1] + 1):
            u = VertexId(row, j)
            xu = self.x[u]
            if min(right, xu + self.widths[u]) - max(x, xu) >= self.eps:
                gained += 1
        return gained

    def must_pin_to_zero(self, v: VertexId) -> bool:
        """True when canonicality forces this row to start at x = 0."""
        if v.pos != 0 or v.layer != self.layer_order[-1]:
            return False
        return all(
            self.x.get(VertexId(layer, 0)) != 0
            for layer in self.layer_order[:-1]
        )


def brute_force_max_contacts(
    g: LayeredGraph,
    cfg: GridSearchConfig | None = None,
    allow_false_adjacencies: bool = False,
) -> tuple[int, Representation]:
    """Exhaustive contact maximum over integer layouts in [0, total width].

    ``allow_false_adjacencies`` drops the validity filter; that variant is the
    unconstrained-packing baseline used to certify regression fixtures, never
    a solver.  The witness is the first optimum in search order, which makes
    it deterministic.
    """
    cfg = cfg or GridSearchConfig()
    _check_caps(g, cfg)
    search = _GridSearch(
        g, cfg.epsilon, int(g.total_width), allow_false_adjacencies
    )
    order = search.order
    edges = g.edges()
    # An edge is decided when its later (in search order) endpoint is placed.
    index = {v: i for i, v in enumerate(order)}
    undecided_after = [0] * (len(order) + 1)
    for u, v in edges:
        undecided_after[max(index[u], index[v])] += 1
    for i in range(len(order) - 1, -1, -1):
        undecided_after[i] += undecided_after[i + 1]

    best_count = -1
    best_witness: dict[VertexId, int] = {}

    def dfs(idx: int, count: int) -> None:
        nonlocal best_count, best_witness
        if idx == len(order):
            if count > best_count:
                best_count = count
                best_witness = dict(search.x)
            return
        if count + undecided_after[idx] <= best_count:
            return
        v = order[idx]
        if v.pos == 0:
            lo = 0
        else:
            pred = VertexId(v.layer, v.pos - 1)
            lo = search.x[pred] + search.widths[pred]
        hi = search.max_position - search.widths[v] - search.row_rest[v]
        if search.must_pin_to_zero(v):
            hi = min(hi, 0)
        for x in range(lo, hi + 1):
            if search.hits_false_adjacency(v, x):
                continue
            gained = search.vertical_gain(v, x)
            if v.pos > 0 and x == lo:
                gained += 1
            if count + gained + undecided_after[idx + 1] <= best_count:
                continue
            search.x[v] = x
            dfs(idx + 1, count + gained)
            del search.x[v]

    dfs(0, 0)
    witness = _normalized({v: Fraction(x) for v, x in best_witness.items()}, cfg.epsilon)
    return best_count, witness


def brute_force_min_gap(
    g: LayeredGraph, cfg: GridSearchConfig | None = None
) -> tuple[Fraction, Representation]:
    """Exhaustive gap minimum over valid integer layouts inside the strip.

    The strip has width w_max * K: every rectangle must lie in [0, strip].
    Without that bound the objective is degenerate (adjacent rows can always
    be slid fully apart, erasing every constraint).
    """
    cfg = cfg or GridSearchConfig()
    _check_caps(g, cfg)
    strip = int(g.max_width) * g.max_layer_size
    search = _GridSearch(g, cfg.epsilon, strip, allow_false_adjacencies=False)
    order = search.order

    # No layout can spend more gap than the rows' total slack inside the
    # strip; starting from that bound also caps the search that concludes
    # infeasibility.
    slack = sum(
        strip - sum(search.widths[VertexId(i, j)] for j in range(g.layer_size(i)))
        for i in range(g.num_layers)
    )
    best_gap = slack + 1
    best_witness: dict[VertexId, int] = {}

    def dfs(idx: int, gap: int) -> None:
        nonlocal best_gap, best_witness
        if gap >= best_gap:
            return
        if idx == len(order):
            best_gap = gap
            best_witness = dict(search.x)
            return
        v = order[idx]
        if v.pos == 0:
            lo = 0
            budget = None
        else:
            pred = VertexId(v.layer, v.pos - 1)
            lo = search.x[pred] + search.widths[pred]
            budget = best_gap - 1 - gap
        hi = search.max_position - search.widths[v] - search.row_rest[v]
        if budget is not None:
            hi = min(hi, lo + budget)
        if search.must_pin_to_zero(v):
            hi = min(hi, 0)
        for x in range(lo, hi + 1):
            if search.hits_false_adjacency(v, x):
                continue
            added = 0 if v.pos == 0 else x - lo
            if gap + added >= best_gap:
                break
            search.x[v] = x
            dfs(idx + 1, gap + added)
            del search.x[v]

    dfs(0, 0)
    if not best_witness:
        raise StripInfeasibleError(
            f"no valid layout fits the strip of width {strip}"
        )
    witness = _normalized({v: Fraction(x) for v, x in best_witness.items()}, cfg.epsilon)
    return Fraction(best_gap), witness


def _normalized(x: dict[VertexId, Fraction], epsilon) -> Representation:
    shift = min(x.values()) if x else Fraction(0)
    return Representation(
        x={v: value - shift for v, value in x.items()}, epsilon=Fraction(epsilon)
    )


# ---------------------------------------------------------------------------
# Second, mechanically different routes.


def subset_max_contacts(
    g: LayeredGraph, cfg: GridSearchConfig | None = None
) -> tuple[int, Representation]:
    """Contact maximum by enumerating realized-edge subsets, largest first.

    Each candidate subset is tested for geometric consistency as a
    difference-constraint system.  Enumeration proceeds by iterative
    deepening on the number of dropped edges; subsets that fail leave a
    negative cycle, and only supersets dropping one of the cycle's edges can
    ever succeed, so the walk branches over those (which skips doomed subsets
    without changing what is enumerable).
    """
    from .exact import DifferenceConstraintSystem, negative_cycle

    cfg = cfg or GridSearchConfig()
    _check_caps(g, cfg)
    epsilon = Fraction(cfg.epsilon)
    edges = g.edges()
    vertices = list(g.vertices())
    index = {v: i for i, v in enumerate(vertices)}

    hard: list[tuple[int, int, Fraction]] = []
    for u, v in g.horizontal_edges():
        hard.append((index[u], index[v], -g.width(u)))
    f_left, f_right = false_adjacency_pairs(g)
    for a, b in sorted(f_left):
        hard.append((index[b], index[a], -g.width(b)))
    for a, b in sorted(f_right):
        hard.append((index[a], index[b], -g.width(a)))
    active: dict[Edge, list[tuple[int, int, Fraction]]] = {}
    for u, v in g.horizontal_edges():
        active[(u, v)] = [(index[v], index[u], g.width(u))]
    for u, v in g.vertical_edges():
        active[(u, v)] = [
            (index[v], index[u], g.width(u) - epsilon),
            (index[u], index[v], g.width(v) - epsilon),
        ]

    def probe(dropped: frozenset[Edge]):
        rows = list(hard)
        owners: list[Edge | None] = [None] * len(rows)
        for e in edges:
            if e not in dropped:
                for row in active[e]:
                    rows.append(row)
                    owners.append(e)
        cycle, dist = negative_cycle(
            DifferenceConstraintSystem(num_vars=len(vertices), rows=tuple(rows))
        )
        if cycle is None:
            return None, dist
        blockers = sorted({owners[r] for r in cycle if owners[r] is not None})
        return blockers, None

    for lost in range(len(edges) + 1):
        seen: set[frozenset[Edge]] = set()

        def search(dropped: frozenset[Edge], budget: int):
            blockers, dist = probe(dropped)
            if blockers is None:
                return dist
            if budget == 0 or not blockers:
                return None
            for e in blockers:
                extended = dropped | {e}
                if extended in seen:
                    continue
                seen.add(extended)
                found = search(extended, budget - 1)
                if found is not None:
                    return found
            return None

        dist = search(frozenset(), lost)
        if dist is not None:
            positions = {v: dist[index[v]] for v in vertices}
            return len(edges) - lost, _normalized(positions, epsilon)
    raise RuntimeError("even the empty contact set was infeasible")


def _compositions(total: int, slots: int) -> Iterator[tuple[int, ...]]:
    if slots == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, slots - 1):
            yield (first,) + rest


def composition_min_gap(g: LayeredGraph, cfg: GridSearchConfig | None = None) -> Fraction:
    """Gap minimum by enumerating gap vectors and aligning rigid rows.

    For a target total, every distribution of that many gap units over the
    slots between same-row neighbors makes each row a rigid block; a
    layer-by-layer reachability pass over integer row offsets inside the strip
    then decides whether any alignment avoids all false adjacencies.
    """
    cfg = cfg or GridSearchConfig()
    _check_caps(g, cfg)
    strip = int(g.max_width) * g.max_layer_size
    row_widths = [[int(w) for w in row] for row in g.widths]
    slots_per_row = [max(0, len(row) - 1) for row in row_widths]
    total_slots = sum(slots_per_row)
    adjacent = set(g.vertical_edges())

    def row_positions(layer: int, offset: int, gaps: tuple[int, ...]) -> list[tuple[int, int]]:
        spans = []
        x = offset
        for j, w in enumerate(row_widths[layer]):
            spans.append((x, x + w))
            x += w + (gaps[j] if j < len(gaps) else 0)
        return spans

    f_left, f_right = false_adjacency_pairs(g)
    sides_by_layer: dict[int, list[tuple[int, int, bool]]] = {}
    for a, b in f_left:  # b entirely left of a
        sides_by_layer.setdefault(a.layer, []).append((a.pos, b.pos, False))
    for a, b in f_right:  # a entirely left of b
        sides_by_layer.setdefault(a.layer, []).append((a.pos, b.pos, True))

    def compatible(layer: int, lower: list[tuple[int, int]], upper: list[tuple[int, int]]) -> bool:
        for j, (lo_l, hi_l) in enumerate(lower):
            for m, (lo_u, hi_u) in enumerate(upper):
                if min(hi_l, hi_u) - max(lo_l, lo_u) > 0:
                    if (VertexId(layer, j), VertexId(layer + 1, m)) not in adjacent:
                        return False
        for j, m, lower_is_left in sides_by_layer.get(layer, ()):
            if lower_is_left:
                if lower[j][1] > upper[m][0]:
                    return False
            elif upper[m][1] > lower[j][0]:
                return False
        return True

    # Gap units can never exceed the slack each row has inside the strip.
    slack = sum(
        max(0, strip - sum(row)) for row in row_widths
    )
    for total in range(slack + 1):
        for flat in _compositions(total, total_slots):
            per_row: list[tuple[int, ...]] = []
            cursor = 0
            for slots in slots_per_row:
                per_row.append(flat[cursor:cursor + slots])
                cursor += slots
            row_len = [
                sum(row_widths[i]) + sum(per_row[i]) for i in range(g.num_layers)
            ]
            if any(length > strip for length in row_len):
                continue
            feasible = {
                offset: row_positions(0, offset, per_row[0])
                for offset in range(strip - row_len[0] + 1)
            }
            for layer in range(1, g.num_layers):
                reachable = {}
                for offset in range(strip - row_len[layer] + 1):
                    spans = row_positions(layer, offset, per_row[layer])
                    if any(
                        compatible(layer - 1, lower, spans)
                        for lower in feasible.values()
                    ):
                        reachable[offset] = spans
                feasible = reachable
                if not feasible:
                    break
            if feasible:
                return Fraction(total)
    raise StripInfeasibleError(f"no valid layout fits the strip of width {strip}")
