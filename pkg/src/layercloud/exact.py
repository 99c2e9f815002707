"""Exact contact maximization for any number of layers.

The model has one binary indicator per edge (1 = the contact is given up) and
one position variable per rectangle.  Row ordering and the nearest-forbidden
pairs are hard rows; contact rows are switched off by their indicator through
a big-M term.  With indicators fixed, every remaining row is a difference
constraint, so feasibility is exact negative-cycle detection and needs no LP.

The solver is a depth-first branch and bound over the indicators in a fixed
edge order, trying 0 (keep the contact) first.  At every node the all-zeros
completion is tested: when it is feasible nothing in the subtree can do
better, so the node closes immediately; the incumbent count prunes the rest.
The first optimum found this way is the lexicographically smallest indicator
vector, independent of anything but the fixed branching order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .model import (
    Edge,
    InvalidInstanceError,
    LayeredGraph,
    Representation,
    VertexId,
    contact_report,
    false_adjacency_pairs,
    validate_graph,
)


@dataclass(frozen=True)
class LinearRow:
    """One inequality: sum of coeffs * var <= rhs."""

    name: str
    coeffs: dict[str, Fraction]
    rhs: Fraction


@dataclass(frozen=True)
class DifferenceConstraintSystem:
    """Conjunction of rows x_a - x_b <= bound over variables 0..num_vars-1."""

    num_vars: int
    rows: tuple[tuple[int, int, Fraction], ...]


def check_feasible(
    system: DifferenceConstraintSystem,
) -> tuple[bool, list[Fraction] | None]:
    """Bellman-Ford feasibility; returns witness positions when feasible.

    The witness is the vector of shortest-path distances from an implicit
    super source, so every constraint holds exactly and integer bounds give
    integer positions.
    """
    cycle, dist = negative_cycle(system)
    if cycle is None:
        return True, dist
    return False, None


def negative_cycle(
    system: DifferenceConstraintSystem,
) -> tuple[list[int] | None, list[Fraction] | None]:
    """Find one negative cycle as row indices, or the feasibility witness.

    Returns (cycle_rows, None) for an infeasible system and (None, dist) for
    a feasible one.  The cycle is recovered by walking predecessor rows from
    a vertex that still improved in the last relaxation round.
    """
    n = system.num_vars
    rows = system.rows
    dist = [Fraction(0)] * n
    pred = [-1] * n
    last_improved = -1
    for _ in range(n + 1):
        changed = False
        for idx, (a, b, bound) in enumerate(rows):
            candidate = dist[b] + bound
            if candidate < dist[a]:
                dist[a] = candidate
                pred[a] = idx
                last_improved = a
                changed = True
        if not changed:
            return None, dist
    # Walk n predecessor steps to be sure of standing on the cycle itself.
    node = last_improved
    for _ in range(n):
        node = rows[pred[node]][1]
    cycle = []
    cursor = node
    while True:
        row = pred[cursor]
        cycle.append(row)
        cursor = rows[row][1]
        if cursor == node:
            break
    return cycle, None


def _x_name(v: VertexId) -> str:
    return f"x_{v.layer}_{v.pos}"


def _c_name(e: Edge) -> str:
    u, v = e
    return f"c_{u.layer}_{u.pos}__{v.layer}_{v.pos}"


@dataclass(frozen=True)
class ContactModel:
    """The instantiated program: indicators, position variables, rows."""

    graph: LayeredGraph
    epsilon: Fraction
    edges: tuple[Edge, ...]
    big_m: Fraction
    rows: tuple[LinearRow, ...]
    # Difference-constraint templates: always-active rows and, per edge, the
    # rows that its indicator switches off.
    hard_diffs: tuple[tuple[int, int, Fraction], ...]
    edge_diffs: dict[Edge, tuple[tuple[int, int, Fraction], ...]]
    var_index: dict[VertexId, int]

    @property
    def indicators(self) -> list[str]:
        return [_c_name(e) for e in self.edges]


def build_model(g: LayeredGraph, epsilon: Fraction | int = 1) -> ContactModel:
    """Instantiate the contact-maximization program for a valid graph.

    Big M is the total width plus epsilon: no layout needs more room, so a
    switched-off row can never bind.
    """
    violations = validate_graph(g)
    if violations:
        raise InvalidInstanceError(f"invalid graph: {violations[0]}")
    eps = Fraction(epsilon)
    if eps <= 0:
        raise InvalidInstanceError(f"epsilon must be positive, got {eps}")
    if eps > g.min_width:
        raise InvalidInstanceError(
            f"epsilon {eps} exceeds the smallest width {g.min_width}"
        )
    big_m = g.total_width + eps
    edges = tuple(
        sorted(g.edges(), key=lambda e: (e[0].layer, e[0].pos, e[1].layer, e[1].pos))
    )
    vertices = list(g.vertices())
    var_index = {v: i for i, v in enumerate(vertices)}

    rows: list[LinearRow] = []
    hard: list[tuple[int, int, Fraction]] = []
    edge_diffs: dict[Edge, tuple[tuple[int, int, Fraction], ...]] = {}

    def tag(e: Edge) -> str:
        u, v = e
        return f"{u.layer}_{u.pos}__{v.layer}_{v.pos}"

    for e in edges:
        u, v = e
        w_u = g.width(u)
        if u.layer == v.layer:
            # Ordering is hard; the abutment check is indicator-controlled.
            rows.append(
                LinearRow(
                    name=f"order_{tag(e)}",
                    coeffs={_x_name(u): Fraction(1), _x_name(v): Fraction(-1)},
                    rhs=-w_u,
                )
            )
            rows.append(
                LinearRow(
                    name=f"habut_{tag(e)}",
                    coeffs={
                        _x_name(v): Fraction(1),
                        _x_name(u): Fraction(-1),
                        _c_name(e): -big_m,
                    },
                    rhs=w_u,
                )
            )
            hard.append((var_index[u], var_index[v], -w_u))
            edge_diffs[e] = ((var_index[v], var_index[u], w_u),)
        else:
            w_v = g.width(v)
            rows.append(
                LinearRow(
                    name=f"vlow_{tag(e)}",
                    coeffs={
                        _x_name(v): Fraction(1),
                        _x_name(u): Fraction(-1),
                        _c_name(e): -big_m,
                    },
                    rhs=w_u - eps,
                )
            )
            rows.append(
                LinearRow(
                    name=f"vhigh_{tag(e)}",
                    coeffs={
                        _x_name(u): Fraction(1),
                        _x_name(v): Fraction(-1),
                        _c_name(e): -big_m,
                    },
                    rhs=w_v - eps,
                )
            )
            edge_diffs[e] = (
                (var_index[v], var_index[u], w_u - eps),
                (var_index[u], var_index[v], w_v - eps),
            )
    f_left, f_right = false_adjacency_pairs(g)
    for a, b in sorted(f_left):
        # b stays entirely left of a.
        rows.append(
            LinearRow(
                name=f"fleft_{tag((a, b))}",
                coeffs={_x_name(b): Fraction(1), _x_name(a): Fraction(-1)},
                rhs=-g.width(b),
            )
        )
        hard.append((var_index[b], var_index[a], -g.width(b)))
    for a, b in sorted(f_right):
        # a stays entirely left of b.
        rows.append(
            LinearRow(
                name=f"fright_{tag((a, b))}",
                coeffs={_x_name(a): Fraction(1), _x_name(b): Fraction(-1)},
                rhs=-g.width(a),
            )
        )
        hard.append((var_index[a], var_index[b], -g.width(a)))

    return ContactModel(
        graph=g,
        epsilon=eps,
        edges=edges,
        big_m=big_m,
        rows=tuple(rows),
        hard_diffs=tuple(hard),
        edge_diffs=edge_diffs,
        var_index=var_index,
    )


@dataclass(frozen=True)
class ExactResult:
    representation: Representation
    lost_count: int


def solve_branch_and_bound(model: ContactModel) -> ExactResult:
    """Minimize the number of given-up contacts; return the witness layout.

    Node analysis tests the all-zeros completion; when it is infeasible, the
    offending negative cycle is removed edge-wise and the process repeated,
    which yields owner-disjoint conflicts: their number lower-bounds the
    losses still needed below the node (and any completion whose conflicts
    only involve already-fixed zero edges kills the subtree outright).  The
    edges removed this way also form a feasible assignment, whose size
    tightens the pruning bound without touching the reported witness, so the
    first optimum found is still the lexicographically smallest one.

    Every c = 0 edge is realized in the witness and no false adjacency can
    appear (both asserted before returning).
    """
    g = model.graph
    edges = model.edges
    num_vars = len(model.var_index)
    edge_index = {e: i for i, e in enumerate(edges)}

    def analyze(ones: set[Edge], decided_upto: int):
        """('feasible', witness) | ('bound', lb, greedy_extra) | ('dead',)."""
        excluded = set(ones)
        lb = 0
        while True:
            rows = list(model.hard_diffs)
            owners: list[Edge | None] = [None] * len(rows)
            for e in edges:
                if e not in excluded:
                    for row in model.edge_diffs[e]:
                        rows.append(row)
                        owners.append(e)
            cycle, dist = negative_cycle(
                DifferenceConstraintSystem(num_vars=num_vars, rows=tuple(rows))
            )
            if cycle is None:
                if lb == 0:
                    return ("feasible", dist)
                return ("bound", lb, len(excluded) - len(ones))
            flippable = {
                owners[r]
                for r in cycle
                if owners[r] is not None and edge_index[owners[r]] > decided_upto
            }
            if not flippable:
                return ("dead",)
            lb += 1
            excluded |= flippable

    best_count = len(edges) + 1
    best_positions: list[Fraction] | None = None
    # Any feasible assignment bounds the optimum; c = 1 everywhere always is.
    greedy_bound = len(edges)

    def descend(idx: int, ones: set[Edge], analysis) -> None:
        nonlocal best_count, best_positions, greedy_bound
        if analysis[0] == "dead":
            return
        if analysis[0] == "feasible":
            if len(ones) < best_count:
                best_count = len(ones)
                best_positions = analysis[1]
            return
        lb = analysis[1]
        greedy_bound = min(greedy_bound, len(ones) + analysis[2])
        if len(ones) + lb >= best_count or len(ones) + lb > greedy_bound:
            return
        if idx == len(edges):
            return
        edge = edges[idx]
        # c = 0 first: the completion is unchanged, so the analysis carries
        # over (a valid, merely looser, bound for the child).
        descend(idx + 1, ones, analysis)
        ones.add(edge)
        descend(idx + 1, ones, analyze(ones, idx))
        ones.remove(edge)

    descend(0, set(), analyze(set(), -1))
    if best_positions is None:
        # The hard rows alone are always satisfiable: rows can be spread out.
        rows = tuple(model.hard_diffs)
        ok, witness = check_feasible(
            DifferenceConstraintSystem(num_vars=num_vars, rows=rows)
        )
        if not ok:
            raise RuntimeError("hard constraint rows are infeasible")
        best_count = len(edges)
        best_positions = witness

    shift = min(best_positions)
    coords = {
        v: best_positions[i] - shift for v, i in model.var_index.items()
    }
    representation = Representation(x=coords, epsilon=model.epsilon)
    report = contact_report(g, representation)
    if report.false_adjacencies:
        raise AssertionError("witness has a false adjacency despite hard rows")
    if len(report.lost) != best_count:
        # Fewer would contradict optimality (the realized set would be a
        # cheaper feasible assignment); more would mean a broken witness.
        raise AssertionError(
            f"witness loses {len(report.lost)} contacts, solver claimed {best_count}"
        )
    return ExactResult(representation=representation, lost_count=best_count)


def export_lp(model: ContactModel) -> str:
    """The model in LP file format, with integer coefficients per row.

    Each row is scaled by the least common multiple of its coefficient
    denominators, which changes nothing about the feasible set but keeps the
    text exact.  Position variables are free; indicators are binary.
    """
    lines = ["Minimize", " obj: " + (" + ".join(model.indicators) or "0")]
    lines.append("Subject To")
    for row in model.rows:
        scale = lcm(
            row.rhs.denominator, *(c.denominator for c in row.coeffs.values())
        )
        terms = []
        for var, coeff in row.coeffs.items():
            value = int(coeff * scale)
            if value >= 0:
                terms.append(f"+ {value} {var}")
            else:
                terms.append(f"- {-value} {var}")
        joined = " ".join(terms)
        lines.append(f" {row.name}: {joined} <= {int(row.rhs * scale)}")
    lines.append("Bounds")
    for v in sorted(model.var_index):
        lines.append(f" {_x_name(v)} free")
    if model.indicators:
        lines.append("Binary")
        for name in model.indicators:
            lines.append(f" {name}")
    lines.append("End")
    return "\n".join(lines) + "\n"
