"""List assignments, color requests, satisfaction accounting, and the
degree-choosable coloring engine shared by all solvers.

A list assignment is a plain dict mapping each vertex to a set of
non-negative integer colors; a coloring is a dict vertex -> color.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import BudgetExceededError, PreconditionError
from .graph import Graph, block_cut_tree

ListAssignment = dict


def validate_lists(g: Graph, L: dict) -> None:
    for v in range(g.n):
        if v not in L:
            raise PreconditionError(f"vertex {v} has no list")
        if not L[v]:
            raise PreconditionError(f"vertex {v} has an empty list")
        for c in L[v]:
            if not isinstance(c, int) or c < 0:
                raise PreconditionError(
                    f"vertex {v} has invalid color {c!r} in its list"
                )


# ---------------------------------------------------------------------------
# Requests


@dataclass(frozen=True)
class Request:
    """A color request on a graph.

    kind "unweighted": prefs maps requested vertex -> preferred color.
    kind "unique": prefs plus a positive weight per requested vertex.
    kind "weighted": table maps (vertex, color) -> non-negative weight.
    """

    kind: str
    prefs: dict = field(default_factory=dict)
    weights: dict = field(default_factory=dict)
    table: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("unweighted", "unique", "weighted"):
            raise PreconditionError(f"unknown request kind {self.kind!r}")
        if self.kind == "unique":
            for v in self.prefs:
                w = self.weights.get(v)
                if w is None or w <= 0:
                    raise PreconditionError(
                        f"uniquely weighted request needs a positive weight "
                        f"at vertex {v}"
                    )

    def domain(self) -> set:
        if self.kind == "weighted":
            return {v for (v, c), w in self.table.items() if w > 0}
        return set(self.prefs)

    def total(self) -> Union[int, Fraction]:
        if self.kind == "unweighted":
            return len(self.prefs)
        if self.kind == "unique":
            return sum(self.weights.values(), Fraction(0))
        return sum(self.table.values(), Fraction(0))

    def is_widespread(self, g: Graph) -> bool:
        return self.domain() == set(range(g.n))

    def validate(self, g: Graph, L: dict) -> None:
        if self.kind == "weighted":
            for (v, c), w in self.table.items():
                if not (0 <= v < g.n):
                    raise PreconditionError(f"request vertex {v} out of range")
                if c not in L[v]:
                    raise PreconditionError(
                        f"requested color {c} at vertex {v} is not in its list"
                    )
                if w < 0:
                    raise PreconditionError(
                        f"negative weight at vertex {v}, color {c}"
                    )
            return
        for v, c in self.prefs.items():
            if not (0 <= v < g.n):
                raise PreconditionError(f"request vertex {v} out of range")
            if c not in L[v]:
                raise PreconditionError(
                    f"requested color {c} at vertex {v} is not in its list"
                )


def check_coloring(g: Graph, L: dict, coloring: dict) -> None:
    """Raise unless coloring is a total, on-list, proper coloring."""
    for v in range(g.n):
        if v not in coloring:
            raise PreconditionError(f"coloring misses vertex {v}")
        if coloring[v] not in L[v]:
            raise PreconditionError(
                f"vertex {v} is colored {coloring[v]}, not in its list"
            )
    for u, v in g.edges:
        if coloring[u] == coloring[v]:
            raise PreconditionError(
                f"edge ({u},{v}) is monochromatic in color {coloring[u]}"
            )


def satisfied_amount(
    g: Graph, L: dict, coloring: dict, request: Request
) -> Union[int, Fraction]:
    """How much of the request the coloring satisfies.

    Validates the coloring first; counting happens only on valid input.
    """
    check_coloring(g, L, coloring)
    if request.kind == "unweighted":
        return sum(1 for v, c in request.prefs.items() if coloring[v] == c)
    if request.kind == "unique":
        return sum(
            (request.weights[v] for v, c in request.prefs.items() if coloring[v] == c),
            Fraction(0),
        )
    return sum(
        (w for (v, c), w in request.table.items() if coloring[v] == c),
        Fraction(0),
    )


def reduce_to_unique(request: Request, L: dict) -> Request:
    """Keep one maximum-weight color per vertex (tie: smallest color).

    The retained total is at least total / max list size, since each
    vertex keeps its heaviest entry out of at most |L(v)| entries.
    """
    if request.kind != "weighted":
        raise PreconditionError("reduce_to_unique expects a general weighted request")
    per_vertex: dict = {}
    for (v, c), w in request.table.items():
        per_vertex.setdefault(v, []).append((c, w))
    prefs = {}
    weights = {}
    for v, entries in per_vertex.items():
        c, w = max(entries, key=lambda cw: (cw[1], -cw[0]))
        if w > 0:
            prefs[v] = c
            weights[v] = Fraction(w)
    return Request(kind="unique", prefs=prefs, weights=weights)


# ---------------------------------------------------------------------------
# Degree-choosable coloring


@dataclass(frozen=True)
class Infeasible:
    """No coloring: the instance is a bad component with no escape."""

    component: tuple
    reason: str


def _is_bad_instance(g: Graph, L: dict) -> bool:
    if any(len(L[v]) > g.degree(v) for v in range(g.n)):
        return False
    return block_cut_tree(g).all_blocks_clique_or_odd_cycle()


def _backtrack_coloring(
    g: Graph, L: dict, budget: Optional[int] = None
) -> Optional[dict]:
    """Complete search with fail-first ordering; None iff uncolorable."""
    order = sorted(range(g.n), key=lambda v: (len(L[v]), v))
    color: dict = {}
    nodes = 0

    def rec(i: int) -> bool:
        nonlocal nodes
        if i == len(order):
            return True
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExceededError(
                f"coloring search exceeded {budget} nodes"
            )
        v = order[i]
        used = {color[u] for u in g.neighbors(v) if u in color}
        for c in sorted(L[v]):
            if c not in used:
                color[v] = c
                if rec(i + 1):
                    return True
                del color[v]
        return False

    return dict(color) if rec(0) else None


def degree_choosable_coloring(
    g: Graph, L: dict, component_cap: int = 20
) -> Union[dict, Infeasible]:
    """Proper on-list coloring of a connected graph with |L(v)| >= deg(v).

    Fast path: when some vertex has list slack, greedy coloring in order
    of decreasing distance from it always succeeds.  With all lists
    tight but some block neither a clique nor an odd cycle, a coloring
    still exists; complete backtracking finds it.  Otherwise the
    instance is a bad component and exhaustive search decides it.
    """
    validate_lists(g, L)
    g.require_connected()
    for v in range(g.n):
        if len(L[v]) < g.degree(v):
            raise PreconditionError(
                f"vertex {v} has list size {len(L[v])} below degree {g.degree(v)}"
            )
    slack = [v for v in range(g.n) if len(L[v]) > g.degree(v)]
    if slack:
        root = slack[0]
        dist = g.bfs_distances(root)
        order = sorted(range(g.n), key=lambda v: (-dist[v], v))
        color: dict = {}
        for v in order:
            used = {color[u] for u in g.neighbors(v) if u in color}
            avail = sorted(c for c in L[v] if c not in used)
            if not avail:
                raise PreconditionError(
                    f"greedy ran out of colors at vertex {v}; "
                    "input violated the slack contract"
                )
            color[v] = avail[0]
        return color

    bad = _is_bad_instance(g, L)
    if bad and g.n > component_cap:
        raise BudgetExceededError(
            f"bad component on {g.n} vertices exceeds cap {component_cap}"
        )
    found = _backtrack_coloring(g, L)
    if found is not None:
        return found
    if not bad:
        raise PreconditionError(
            "no coloring found although some block is neither a clique "
            "nor an odd cycle; input lists are inconsistent"
        )
    return Infeasible(
        component=tuple(range(g.n)),
        reason="all lists tight and every block a clique or odd cycle; "
        "exhaustive search found no coloring",
    )


def precolor_and_extend(
    g: Graph, L: dict, fixed: dict, component_cap: int = 20
) -> Union[dict, Infeasible]:
    """Color the fixed vertices as given and extend to the whole graph.

    Fixed vertices must be independent with on-list colors.  Their
    colors are deleted from neighbors' lists and each remaining
    component is colored by degree_choosable_coloring.
    """
    validate_lists(g, L)
    for v, c in fixed.items():
        if not (0 <= v < g.n):
            raise PreconditionError(f"fixed vertex {v} out of range")
        if c not in L[v]:
            raise PreconditionError(
                f"fixed color {c} at vertex {v} is not in its list"
            )
    fixed_set = set(fixed)
    for u, v in g.edges:
        if u in fixed_set and v in fixed_set:
            raise PreconditionError(
                f"fixed vertices {u} and {v} are adjacent"
            )
    rest = [v for v in range(g.n) if v not in fixed_set]
    if not rest:
        return dict(fixed)
    pruned = {}
    for v in rest:
        removed = {fixed[u] for u in g.neighbors(v) if u in fixed_set}
        pruned[v] = set(L[v]) - removed
        if not pruned[v]:
            raise PreconditionError(
                f"vertex {v} has no colors left after fixing its neighbors"
            )
    sub, ids = g.induced(rest)
    out = dict(fixed)
    for comp in sub.components():
        comp_g, comp_pos = sub.induced(comp)
        comp_ids = [ids[i] for i in comp_pos]
        comp_L = {i: pruned[comp_ids[i]] for i in range(comp_g.n)}
        res = degree_choosable_coloring(comp_g, comp_L, component_cap)
        if isinstance(res, Infeasible):
            return Infeasible(
                component=tuple(comp_ids[i] for i in res.component),
                reason=res.reason,
            )
        for i, c in res.items():
            out[comp_ids[i]] = c
    return out
