"""Flexibility solvers for bounded-degree graphs.

Two pipelines over the same skeleton: pick an independent subset of the
requested vertices, prune lists, destroy bad components by un-fixing a
few requests, then precolor the survivors and extend.  The unweighted
solver certifies a 1/(6 maxdeg) fraction, the weighted one
1/(2 maxdeg^4) via distance-3 independence and a unique-weight
reduction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import InternalInvariantError, PreconditionError
from .graph import BrooksObstructionError, Graph, block_cut_tree, proper_coloring
from .listcolor import (
    Infeasible,
    Request,
    precolor_and_extend,
    reduce_to_unique,
    satisfied_amount,
    validate_lists,
)


@dataclass(frozen=True)
class ComponentReport:
    """One component of g minus the precolored set, with pruned lists."""

    vertices: tuple
    pruned_lists: dict
    bad: bool
    tight: bool
    block_tags: tuple  # ((block vertex tuple, tag), ...)
    terminal_blocks: tuple  # vertex tuples of terminal blocks


@dataclass
class SolverOutcome:
    coloring: dict
    satisfied: Union[int, Fraction]
    certified_fraction: Fraction
    request_total: Union[int, Fraction]
    mode: str
    trace: dict = field(default_factory=dict)

    @property
    def certified_amount(self) -> Fraction:
        return self.certified_fraction * self.request_total


def _check_class_L(g: Graph, L: dict, delta: int) -> None:
    for v in range(g.n):
        d = g.degree(v)
        need = d + 1 if d < delta else d
        if len(L[v]) < need:
            raise PreconditionError(
                f"vertex {v} has list size {len(L[v])}, needs {need} "
                f"(degree {d}, maxdeg {delta})"
            )


def _check_solver_preconditions(g: Graph, L: dict) -> int:
    g.require_connected()
    validate_lists(g, L)
    delta = g.max_degree()
    if delta < 3:
        raise PreconditionError(f"maximum degree must be >= 3, got {delta}")
    if g.is_complete():
        raise PreconditionError(
            f"input is the complete graph on {g.n} vertices; excluded"
        )
    _check_class_L(g, L, delta)
    return delta


def classify_components(g: Graph, L: dict, S: set, prefs: dict) -> list:
    """Components of g minus S with pruned lists and bad/good flags.

    A component is bad when every pruned list is tight to the degree
    inside the component and every block is a clique or an odd cycle.
    """
    for r in S:
        if r not in prefs:
            raise PreconditionError(f"precolored vertex {r} has no requested color")
        if prefs[r] not in L[r]:
            raise PreconditionError(
                f"requested color {prefs[r]} at vertex {r} is not in its list"
            )
    rest = [v for v in range(g.n) if v not in S]
    pruned = {
        v: frozenset(set(L[v]) - {prefs[r] for r in g.neighbors(v) if r in S})
        for v in rest
    }
    sub, ids = g.induced(rest)
    reports = []
    for comp in sub.components():
        comp_g, pos = sub.induced(comp)
        orig = tuple(ids[i] for i in pos)
        comp_lists = {v: pruned[v] for v in orig}
        for i, v in enumerate(orig):
            if len(comp_lists[v]) < comp_g.degree(i):
                raise InternalInvariantError(
                    f"pruned list at vertex {v} fell below its component degree"
                )
        tight = all(
            len(comp_lists[v]) == comp_g.degree(i) for i, v in enumerate(orig)
        )
        bct = block_cut_tree(comp_g)
        block_tags = tuple(
            (tuple(orig[i] for i in b.vertices), b.tag) for b in bct.blocks
        )
        terminal = tuple(
            tuple(orig[i] for i in b.vertices) for b in bct.blocks if b.terminal
        )
        bad = tight and bct.all_blocks_clique_or_odd_cycle()
        reports.append(
            ComponentReport(orig, comp_lists, bad, tight, block_tags, terminal)
        )
    return reports


def _check_terminal_counting(
    g: Graph, reports: list, S: set, delta: int
) -> None:
    """Edge-count facts that hold for every bad component, so any
    failure is a bug or a violated precondition."""
    for rep in reports:
        if not rep.bad:
            continue
        comp = set(rep.vertices)
        out_edges = sum(
            1 for v in comp for u in g.neighbors(v) if u in S
        )
        sub, _ = g.induced(rep.vertices)
        is_kdelta = sub.n == delta and sub.is_complete()
        if is_kdelta or sub.n == 1:
            if out_edges != delta:
                raise InternalInvariantError(
                    f"bad component {rep.vertices} should have exactly "
                    f"{delta} edges to the precolored set, found {out_edges}"
                )
        elif out_edges < 2 * delta - 2:
            raise InternalInvariantError(
                f"bad component {rep.vertices} has only {out_edges} edges "
                f"to the precolored set, expected >= {2 * delta - 2}"
            )


def b_value(g: Graph, L: dict, Rpp: set, prefs: dict, r: int) -> int:
    """Decrease in the number of bad components when r stops being
    precolored."""
    if r not in Rpp:
        raise PreconditionError(f"vertex {r} is not in the precolored set")
    c1 = sum(1 for rep in classify_components(g, L, Rpp, prefs) if rep.bad)
    c2 = sum(
        1 for rep in classify_components(g, L, Rpp - {r}, prefs) if rep.bad
    )
    return c1 - c2


def _independent_with_count(
    g: Graph,
    R: set,
    distance: int,
    mode: str,
    weights: Optional[dict] = None,
) -> tuple:
    """Best color class of a proper coloring of g^distance restricted to
    R, together with the number of colors the coloring used."""
    used_mode = mode
    try:
        coloring = proper_coloring(g, distance, mode)
    except BrooksObstructionError:
        # the power graph collapsed to a clique or odd cycle; greedy
        # still certifies the bound since its color count stays small
        used_mode = "greedy"
        coloring = proper_coloring(g, distance, "greedy")
    chi_hat = len(set(coloring.values()))
    classes: dict = {}
    for v in R:
        classes.setdefault(coloring[v], set()).add(v)
    if weights is None:
        best = max(classes.items(), key=lambda kv: (len(kv[1]), -kv[0]))
    else:
        best = max(
            classes.items(),
            key=lambda kv: (sum(weights[v] for v in kv[1]), -kv[0]),
        )
    return set(best[1]), chi_hat, used_mode


def _finish(
    g: Graph,
    L: dict,
    prefs: dict,
    Rpp: set,
    request: Request,
    certified_fraction: Fraction,
    mode: str,
    trace: dict,
) -> SolverOutcome:
    fixed = {r: prefs[r] for r in Rpp}
    res = precolor_and_extend(g, L, fixed)
    if isinstance(res, Infeasible):
        raise InternalInvariantError(
            f"extension failed on component {res.component} although all "
            "bad components were destroyed"
        )
    sat = satisfied_amount(g, L, res, request)
    total = request.total()
    if sat < certified_fraction * total:
        raise InternalInvariantError(
            f"satisfied amount {sat} fell below the certified bound "
            f"{certified_fraction} * {total}"
        )
    return SolverOutcome(res, sat, certified_fraction, total, mode, trace)


def solve_unweighted(
    g: Graph, L: dict, request: Request, mode: str = "brooks"
) -> SolverOutcome:
    """Proper list coloring satisfying at least |R|/(6 chi) requests,
    where chi is the color count of the independent-set coloring
    (at most maxdeg in brooks mode, maxdeg+1 in greedy mode)."""
    if request.kind != "unweighted":
        raise PreconditionError("solve_unweighted expects an unweighted request")
    delta = _check_solver_preconditions(g, L)
    request.validate(g, L)
    prefs = dict(request.prefs)
    R = set(prefs)
    if not R:
        coloring = _color_without_requests(g, L)
        return SolverOutcome(coloring, 0, Fraction(0), 0, mode, {"note": "empty request"})

    R_prime, chi_hat, used_mode = _independent_with_count(g, R, 1, mode)
    trace: dict = {
        "R_prime": sorted(R_prime),
        "chi_hat": chi_hat,
        "independent_mode": used_mode,
        "moves": [],
    }

    Rpp = set(R_prime)
    R_plus: set = set()
    discharging: Optional[dict] = None
    while True:
        reports = classify_components(g, L, Rpp, prefs)
        _check_terminal_counting(g, reports, Rpp, delta)
        bad = [rep for rep in reports if rep.bad]
        if not bad:
            break
        c1 = len(bad)
        bs = {
            r: c1
            - sum(
                1
                for rep in classify_components(g, L, Rpp - {r}, prefs)
                if rep.bad
            )
            for r in sorted(Rpp)
        }
        big = [r for r, b in bs.items() if b >= 2]
        if big:
            r = min(big)
            trace["moves"].append(("b>=2", r, bs[r]))
        else:
            if discharging is None:
                discharging = _discharging_diagnostics(g, reports, Rpp)
            bad_vs = {v for rep in bad for v in rep.vertices}
            candidates = [
                r
                for r in sorted(Rpp)
                if any(u in bad_vs for u in g.neighbors(r)) and bs[r] >= 1
            ]
            if not candidates:
                raise InternalInvariantError(
                    "bad components remain but no precolored vertex can "
                    "destroy one"
                )
            r = candidates[0]
            trace["moves"].append(("b>=1", r, bs[r]))
        Rpp.discard(r)
        R_plus.add(r)

    trace["R_plus"] = sorted(R_plus)
    trace["R_pp"] = sorted(Rpp)
    if discharging is not None:
        trace["discharging"] = discharging
    certified = Fraction(1, 6 * chi_hat)
    return _finish(g, L, prefs, Rpp, request, certified, used_mode, trace)


def _discharging_diagnostics(g: Graph, reports: list, Rpp: set) -> dict:
    """Auxiliary bipartite graph between survivors and bad components,
    taken at a state where no move destroys two components at once."""
    bad = [rep for rep in reports if rep.bad]
    deg_r = {r: 0 for r in Rpp}
    deg_a = []
    for rep in bad:
        comp = set(rep.vertices)
        nbrs = {r for r in Rpp if any(u in comp for u in g.neighbors(r))}
        deg_a.append(len(nbrs))
        for r in nbrs:
            deg_r[r] += 1
    for r, d in deg_r.items():
        if d > 2:
            raise InternalInvariantError(
                f"vertex {r} touches {d} bad components although no "
                "double-destroying move exists"
            )
    for rep, d in zip(bad, deg_a):
        if d < 2:
            raise InternalInvariantError(
                f"bad component {rep.vertices} has {d} precolored "
                "neighbors, expected >= 2"
            )
    if 4 * len(Rpp) < 5 * len(bad):
        raise InternalInvariantError(
            f"{len(Rpp)} survivors for {len(bad)} bad components "
            "violates the 5/4 counting bound"
        )
    return {
        "deg_r": dict(sorted(deg_r.items())),
        "deg_components": deg_a,
        "survivors": len(Rpp),
        "bad_components": len(bad),
    }


def _color_without_requests(g: Graph, L: dict) -> dict:
    from .listcolor import degree_choosable_coloring

    res = degree_choosable_coloring(g, L)
    if isinstance(res, Infeasible):
        raise InternalInvariantError(
            "instance inside the solver's graph class has no list coloring"
        )
    return res


def solve_weighted(
    g: Graph, L: dict, request: Request, mode: str = "greedy"
) -> SolverOutcome:
    """Weighted solver via distance-3 independence.

    Uniquely weighted input certifies total/(2 chi3) satisfied weight,
    general weighted input total/(2 chi3 maxlist); chi3 is the color
    count used on the cube of the graph (at most maxdeg^3 either way).
    """
    delta = _check_solver_preconditions(g, L)
    request.validate(g, L)
    trace: dict = {}
    if request.kind == "weighted":
        unique = reduce_to_unique(request, L)
        max_list = max(len(L[v]) for v in range(g.n))
        reduction = Fraction(1, max_list)
        trace["reduced_from_general"] = True
    elif request.kind == "unique":
        unique = request
        reduction = Fraction(1)
    else:
        raise PreconditionError("solve_weighted expects a weighted request")

    prefs = dict(unique.prefs)
    weights = dict(unique.weights)
    R = set(prefs)
    if not R:
        coloring = _color_without_requests(g, L)
        return SolverOutcome(
            coloring, Fraction(0), Fraction(0), request.total(), mode,
            {"note": "empty request"},
        )

    R_prime, chi3, used_mode = _independent_with_count(g, R, 3, mode, weights)
    trace.update(
        R_prime=sorted(R_prime), chi3=chi3, independent_mode=used_mode
    )
    # distance-3 independence: no vertex outside R' sees two R' vertices
    for v in range(g.n):
        if v in R_prime:
            continue
        seen = [u for u in g.neighbors(v) if u in R_prime]
        if len(seen) > 1:
            raise InternalInvariantError(
                f"vertex {v} has two neighbors {seen[:2]} in the "
                "distance-3 independent set"
            )

    reports = classify_components(g, L, R_prime, prefs)
    _check_terminal_counting(g, reports, R_prime, delta)
    R_plus: set = set()
    for rep in reports:
        if not rep.bad:
            continue
        term_vs = {v for blk in rep.terminal_blocks for v in blk}
        candidates = sorted(
            r
            for r in R_prime
            if any(u in term_vs for u in g.neighbors(r))
        )
        if not candidates:
            raise InternalInvariantError(
                f"bad component {rep.vertices} has no precolored vertex "
                "adjacent to a terminal block"
            )
        r = min(candidates, key=lambda x: (weights[x], x))
        R_plus.add(r)

    w_prime = sum((weights[r] for r in R_prime), Fraction(0))
    w_plus = sum((weights[r] for r in R_plus), Fraction(0))
    if 2 * w_plus > w_prime:
        raise InternalInvariantError(
            "removed weight exceeds half the independent set's weight"
        )
    Rpp = R_prime - R_plus
    after = classify_components(g, L, Rpp, prefs)
    if any(rep.bad for rep in after):
        raise InternalInvariantError(
            "bad components survived the terminal-block removal"
        )
    trace["R_plus"] = sorted(R_plus)
    trace["R_pp"] = sorted(Rpp)
    certified = reduction * Fraction(1, 2 * chi3)
    return _finish(g, L, prefs, Rpp, request, certified, used_mode, trace)
