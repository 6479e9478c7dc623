"""Exhaustive ground truth for desk-scale instances.

Enumerates proper list colorings outright; every solver's satisfied
amount and certified bound can be checked against the exact optimum.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import BudgetExceededError, PreconditionError
from .graph import Graph
from .listcolor import Request, validate_lists

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class OracleResult:
    optimum: Union[int, Fraction]
    coloring: Optional[dict]  # None iff no proper list coloring exists
    enumerated: int

    @property
    def colorable(self) -> bool:
        return self.coloring is not None


def _check_budget(g: Graph, L: dict, budget: int) -> None:
    prod = 1
    for v in range(g.n):
        prod *= len(L[v])
        if prod > budget:
            raise BudgetExceededError(
                f"list-assignment search space exceeds budget {budget}"
            )


def optimal_satisfaction(
    g: Graph, L: dict, request: Request, budget: int = DEFAULT_BUDGET
) -> OracleResult:
    """Exact maximum satisfied amount over all proper list colorings.

    Depth-first over vertices in smallest-list-first order, colors
    ascending, with proper-coloring pruning; the sweep is exhaustive.
    """
    validate_lists(g, L)
    request.validate(g, L)
    _check_budget(g, L, budget)
    order = sorted(range(g.n), key=lambda v: (len(L[v]), v))

    if request.kind == "unweighted":
        gain = {(v, c): 1 for v, c in request.prefs.items()}
        zero: Union[int, Fraction] = 0
    elif request.kind == "unique":
        gain = {(v, c): request.weights[v] for v, c in request.prefs.items()}
        zero = Fraction(0)
    else:
        gain = {vc: w for vc, w in request.table.items() if w > 0}
        zero = Fraction(0)

    best_value: list = [None]
    best_coloring: list = [None]
    enumerated = [0]
    color: dict = {}

    def rec(i: int, value) -> None:
        if i == len(order):
            enumerated[0] += 1
            if best_value[0] is None or value > best_value[0]:
                best_value[0] = value
                best_coloring[0] = dict(color)
            return
        v = order[i]
        used = {color[u] for u in g.neighbors(v) if u in color}
        for c in sorted(L[v]):
            if c in used:
                continue
            color[v] = c
            rec(i + 1, value + gain.get((v, c), zero))
            del color[v]

    rec(0, zero)
    if best_coloring[0] is None:
        return OracleResult(zero, None, 0)
    return OracleResult(best_value[0], best_coloring[0], enumerated[0])


def is_degree_choosable_here(
    g: Graph, L: dict, budget: int = DEFAULT_BUDGET
) -> bool:
    """True iff at least one proper list coloring exists."""
    validate_lists(g, L)
    _check_budget(g, L, budget)
    order = sorted(range(g.n), key=lambda v: (len(L[v]), v))
    color: dict = {}

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        used = {color[u] for u in g.neighbors(v) if u in color}
        for c in sorted(L[v]):
            if c not in used:
                color[v] = c
                if rec(i + 1):
                    return True
                del color[v]
        return False

    return rec(0)


def _bruteforce_blocks(g: Graph) -> list:
    """Blocks as maximal 2-connected-ish vertex sets, from first principles.

    A candidate set is a block iff it induces a connected subgraph with
    no cut vertex, uses at least one edge (or is a single vertex in an
    edgeless graph), and no strict superset does the same.
    """
    if g.n == 1:
        return [(0,)]
    candidates = []
    vs = list(range(g.n))
    for mask in range(1, 1 << g.n):
        sub_vs = [v for v in vs if mask >> v & 1]
        if len(sub_vs) < 2:
            continue
        sub, _ = g.induced(sub_vs)
        if not sub.is_connected() or sub.m == 0:
            continue
        if len(sub_vs) == 2:
            candidates.append(tuple(sub_vs))
            continue
        has_cut = False
        for i in range(sub.n):
            rest, _ = sub.induced([x for x in range(sub.n) if x != i])
            if not rest.is_connected():
                has_cut = True
                break
        if not has_cut:
            candidates.append(tuple(sub_vs))
    blocks = [
        c
        for c in candidates
        if not any(set(c) < set(d) for d in candidates if d != c)
    ]
    return sorted(blocks)


def bruteforce_bad_component(g: Graph, L: dict) -> bool:
    """Recompute the bad-component definition from scratch.

    Bad means every list is tight to the degree and every block induces
    a clique or an odd cycle.  Uses an independent block finder so it
    cross-validates the solver-side classification.
    """
    if g.n > 16:
        raise PreconditionError(f"brute-force block finder capped at 16, got {g.n}")
    g.require_connected()
    # empty lists are legal here: an isolated pruned vertex may have
    # lost every color, which is exactly the tight K_1 case
    if any(len(L[v]) != g.degree(v) for v in range(g.n)):
        return False
    for blk in _bruteforce_blocks(g):
        sub, _ = g.induced(blk)
        if sub.is_complete():
            continue
        if sub.is_cycle() and sub.n % 2 == 1:
            continue
        return False
    return True
