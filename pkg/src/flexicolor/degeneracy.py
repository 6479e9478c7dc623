"""Flexible degeneracy orderings.

A spanning-tree walk turns leaves into vertices that precede all their
neighbors in a (maxdeg-1)-degeneracy order.  For 3-connected non-regular
graphs, a hypergraph spanning-set recursion keeps a constant fraction of
any requested set as such leaves.  Exact game connectivity by brute
force serves as ground truth at desk scale.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import (
    BudgetExceededError,
    InternalInvariantError,
    PreconditionError,
)
from .graph import BrooksObstructionError, Graph, proper_coloring


@dataclass(frozen=True)
class DegeneracyOrdering:
    """Vertex order with a back-degree bound and a first-among-neighbors
    set."""

    order: tuple
    k: int
    first: frozenset

    def validate(self, g: Graph) -> None:
        if sorted(self.order) != list(range(g.n)):
            raise PreconditionError("order is not a permutation of the vertices")
        pos = {v: i for i, v in enumerate(self.order)}
        for v in range(g.n):
            back = sum(1 for u in g.neighbors(v) if pos[u] < pos[v])
            if back > self.k:
                raise PreconditionError(
                    f"vertex {v} has {back} earlier neighbors, bound is {self.k}"
                )
        for v in self.first:
            for u in g.neighbors(v):
                if pos[u] < pos[v]:
                    raise PreconditionError(
                        f"vertex {v} is marked first among neighbors but "
                        f"{u} precedes it"
                    )


def _spanning_tree_edges(g: Graph, root: int) -> list:
    """BFS spanning tree as parent edges."""
    parent = {root: None}
    q = deque([root])
    edges = []
    while q:
        v = q.popleft()
        for u in g.neighbors(v):
            if u not in parent:
                parent[u] = v
                edges.append((v, u))
                q.append(u)
    if len(parent) != g.n:
        raise PreconditionError("graph is disconnected; no spanning tree")
    return edges


def ordering_from_tree(
    g: Graph, tree_edges: Iterable[tuple], I: set, w: int
) -> DegeneracyOrdering:
    """Degeneracy order from a spanning tree whose leaves include I.

    Walk the tree minus I starting at the low-degree vertex w, then the
    I vertices; reversing the visit order gives a (maxdeg-1)-degeneracy
    order where every I vertex precedes all of its neighbors.
    """
    delta = g.max_degree()
    I = set(I)
    if g.degree(w) >= delta:
        raise PreconditionError(
            f"start vertex {w} has degree {g.degree(w)}, needs < {delta}"
        )
    if w in I:
        raise PreconditionError(f"start vertex {w} must not be in the leaf set")
    tree_adj: dict = {v: [] for v in range(g.n)}
    count = 0
    for u, v in tree_edges:
        if not g.has_edge(u, v):
            raise PreconditionError(f"tree edge ({u},{v}) is not a graph edge")
        tree_adj[u].append(v)
        tree_adj[v].append(u)
        count += 1
    if count != g.n - 1:
        raise PreconditionError(
            f"spanning tree needs {g.n - 1} edges, got {count}"
        )
    for v in I:
        for u in g.neighbors(v):
            if u in I:
                raise PreconditionError(
                    f"leaf set is not independent: edge ({v},{u})"
                )
        if len(tree_adj[v]) != 1:
            raise PreconditionError(
                f"vertex {v} has tree degree {len(tree_adj[v])}, not a leaf"
            )

    # preorder over the tree minus I, started at w
    visit = []
    seen = {w}
    stack = [w]
    while stack:
        v = stack.pop()
        visit.append(v)
        for u in sorted(tree_adj[v], reverse=True):
            if u not in seen and u not in I:
                seen.add(u)
                stack.append(u)
    if len(visit) != g.n - len(I):
        raise PreconditionError(
            "tree minus the leaf set does not span the rest of the graph"
        )
    visit.extend(sorted(I))
    order = tuple(reversed(visit))
    pos = {v: i for i, v in enumerate(order)}
    first = frozenset(
        v
        for v in range(g.n)
        if all(pos[u] > pos[v] for u in g.neighbors(v))
    )
    if not I <= first:
        raise InternalInvariantError(
            "a designated leaf does not precede all of its neighbors"
        )
    ordering = DegeneracyOrdering(order, delta - 1, first)
    ordering.validate(g)
    return ordering


# ---------------------------------------------------------------------------
# Hypergraphs and the spanning-set recursion


def epsilon_table(d_max: int) -> dict:
    """Avoidable-fraction constants: 1/3 at size 2, then
    eps(d) = 3 eps' / (d + 3 eps') with eps' taken at ceil(d/3 + 1)."""
    table = {2: Fraction(1, 3)}
    for d in range(3, d_max + 1):
        ep = table[(d + 5) // 3]
        table[d] = 3 * ep / (d + 3 * ep)
    return table


def epsilon_value(d: int) -> Fraction:
    if d < 2:
        raise PreconditionError(f"edge size bound must be >= 2, got {d}")
    return epsilon_table(d)[d]


@dataclass(frozen=True)
class Hypergraph:
    """Vertices 0..n-1; edges are vertex subsets, singletons and
    repeated edges allowed."""

    n: int
    edges: tuple

    @staticmethod
    def build(n: int, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        out = []
        for e in edges:
            vs = tuple(sorted(set(e)))
            if not vs:
                raise PreconditionError("empty hyperedge not allowed")
            for v in vs:
                if not (0 <= v < n):
                    raise PreconditionError(f"hyperedge vertex {v} out of range")
            out.append(vs)
        return Hypergraph(n, tuple(out))

    def max_edge_size(self) -> int:
        return max((len(e) for e in self.edges), default=0)


def _hyper_edge_connectivity(h: Hypergraph, need: int = 3) -> int:
    """Edge connectivity, computed only far enough to compare with need.

    Max-flow with unit capacity per hyperedge between vertex 0 and every
    other vertex; augmenting paths stop once the need is met.
    """
    if h.n <= 1:
        return need
    # node ids: vertices 0..n-1, edge e -> in node n+2i, out node n+2i+1
    INF = len(h.edges) + need + 1
    best = need
    for t in range(1, h.n):
        cap: dict = {}

        def add(a, b, c):
            cap[(a, b)] = cap.get((a, b), 0) + c
            cap.setdefault((b, a), 0)

        adj: dict = {}
        for i, e in enumerate(h.edges):
            ein, eout = h.n + 2 * i, h.n + 2 * i + 1
            add(ein, eout, 1)
            adj.setdefault(ein, []).append(eout)
            adj.setdefault(eout, []).append(ein)
            for v in e:
                add(v, ein, INF)
                add(eout, v, INF)
                adj.setdefault(v, []).append(ein)
                adj.setdefault(ein, []).append(v)
                adj.setdefault(eout, []).append(v)
                adj.setdefault(v, []).append(eout)
        flow = 0
        while flow < best:
            # BFS augmenting path from 0 to t
            prev = {0: None}
            q = deque([0])
            while q and t not in prev:
                a = q.popleft()
                for b in adj.get(a, ()):
                    if b not in prev and cap.get((a, b), 0) > 0:
                        prev[b] = a
                        q.append(b)
            if t not in prev:
                break
            b = t
            while prev[b] is not None:
                a = prev[b]
                cap[(a, b)] -= 1
                cap[(b, a)] += 1
                b = a
            flow += 1
        best = min(best, flow)
        if best < need:
            return best
    return best


def is_three_edge_connected(h: Hypergraph) -> bool:
    return _hyper_edge_connectivity(h, 3) >= 3


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def _components_touched(uf: _UnionFind, e: tuple) -> set:
    return {uf.find(v) for v in e}


def hypergraph_spanning_set(h: Hypergraph, d: int) -> list:
    """Indices of a connected spanning edge set of size at most
    (1 - eps(d)) |E|.

    Size-2 case takes a spanning tree.  Otherwise edges meeting many
    components are collected greedily; depending on how many were
    found, the set is either completed with component-merging edges or
    the components are contracted and the recursion continues with a
    smaller edge-size bound.
    """
    if d < 2:
        raise PreconditionError(f"edge size bound must be >= 2, got {d}")
    if h.max_edge_size() > d:
        raise PreconditionError(
            f"hyperedge of size {h.max_edge_size()} exceeds the bound {d}"
        )
    if not is_three_edge_connected(h):
        raise PreconditionError("hypergraph is not 3-edge-connected")
    n, E = h.n, h.edges
    if n * 3 > len(E) * d and n > 1:
        raise InternalInvariantError(
            f"{len(E)} edges of size <= {d} cannot 3-edge-connect {n} vertices"
        )
    result = _spanning_set_rec(h, d)
    uf = _UnionFind(n)
    comps = n
    for i in result:
        roots = sorted(_components_touched(uf, E[i]))
        for r in roots[1:]:
            if uf.union(roots[0], r):
                comps -= 1
    if comps != 1:
        raise InternalInvariantError("selected edges do not span the hypergraph")
    eps = epsilon_value(d)
    if len(result) > (1 - eps) * len(E):
        raise InternalInvariantError(
            f"selected {len(result)} of {len(E)} edges, above the "
            f"(1 - {eps}) bound"
        )
    return sorted(result)


def _spanning_set_rec(h: Hypergraph, d: int) -> list:
    n, E = h.n, h.edges
    if n <= 1:
        return []
    if d == 2:
        uf = _UnionFind(n)
        out = []
        for i, e in enumerate(E):
            if len(e) == 2 and uf.union(e[0], e[1]):
                out.append(i)
        return out

    need = (d + 8) // 3  # ceil(d/3 + 2)
    uf = _UnionFind(n)
    comps = n
    A1 = []
    progress = True
    while progress:
        progress = False
        for i, e in enumerate(E):
            if i in set(A1):
                continue
            touched = _components_touched(uf, e)
            if len(touched) >= need:
                roots = sorted(touched)
                for r in roots[1:]:
                    uf.union(roots[0], r)
                comps -= len(touched) - 1
                A1.append(i)
                progress = True

    k = Fraction(3, d)
    if d == 3:
        alpha_min = Fraction(1, 4)
    else:
        ep = epsilon_value((d + 5) // 3)
        alpha_min = (k * ep - k + 1) / (1 + k * ep)
    if Fraction(len(A1)) >= alpha_min * k * n:
        # complete with component-merging edges, in input order
        out = list(A1)
        for i, e in enumerate(E):
            if comps == 1:
                break
            touched = _components_touched(uf, e)
            if len(touched) > 1:
                roots = sorted(touched)
                for r in roots[1:]:
                    uf.union(roots[0], r)
                comps -= len(touched) - 1
                out.append(i)
        return out

    # contract the components and recurse with smaller edges
    root_ids: dict = {}
    for v in range(n):
        r = uf.find(v)
        if r not in root_ids:
            root_ids[r] = len(root_ids)
    back = []
    small_edges = []
    a1_set = set(A1)
    for i, e in enumerate(E):
        if i in a1_set:
            continue
        contracted = tuple(sorted({root_ids[uf.find(v)] for v in e}))
        small_edges.append(contracted)
        back.append(i)
    d_next = (d + 5) // 3  # ceil(d/3 + 1)
    if any(len(e) > d_next for e in small_edges):
        raise InternalInvariantError(
            "an uncollected edge still meets too many components"
        )
    inner = Hypergraph(len(root_ids), tuple(small_edges))
    if not is_three_edge_connected(inner):
        raise InternalInvariantError(
            "contracted hypergraph lost 3-edge-connectivity"
        )
    chosen = _spanning_set_rec(inner, d_next)
    return list(A1) + [back[i] for i in chosen]


# ---------------------------------------------------------------------------
# The full pipeline on 3-connected non-regular graphs


def is_three_connected(g: Graph) -> bool:
    """Exact vertex 3-connectivity: removal of any two vertices leaves a
    connected graph on at least one vertex."""
    if g.n < 4:
        return False
    if not g.is_connected():
        return False
    for a in range(g.n):
        for b in range(a + 1, g.n):
            rest, _ = g.induced([v for v in range(g.n) if v not in (a, b)])
            if not rest.is_connected():
                return False
    return True


@dataclass
class DegeneracyOutcome:
    ordering: DegeneracyOrdering
    satisfied: int  # |first-among-neighbors  intersect  requested|
    certified_fraction: Fraction
    request_size: int
    trace: dict = field(default_factory=dict)


def flexible_degeneracy_order(
    g: Graph, R0: Iterable[int], mode: str = "greedy"
) -> DegeneracyOutcome:
    """Degeneracy ordering putting a certified fraction of the requested
    vertices before all of their neighbors.

    Pipeline: drop the reserved low-degree vertex, take an independent
    subset, build the component hypergraph, keep the spanning-set
    complement as leaves of a spanning tree, and walk the tree.
    """
    R0 = set(R0)
    for v in R0:
        if not (0 <= v < g.n):
            raise PreconditionError(f"requested vertex {v} out of range")
    delta = g.max_degree()
    if delta < 3:
        raise PreconditionError(f"maximum degree must be >= 3, got {delta}")
    degs = [g.degree(v) for v in range(g.n)]
    low = [v for v in range(g.n) if degs[v] < delta]
    if not low:
        raise PreconditionError("graph is regular; a lower-degree vertex is required")
    if not is_three_connected(g):
        raise PreconditionError("graph is not 3-connected")
    if len(low) == 1 and R0 == set(low):
        raise PreconditionError(
            f"request consisting only of the unique low-degree vertex "
            f"{low[0]} is excluded"
        )
    outside = [v for v in low if v not in R0]
    w = min(outside) if outside else min(low)
    R = R0 - {w}
    eps = epsilon_value(delta)

    if not R:
        tree = _spanning_tree_edges(g, w)
        ordering = ordering_from_tree(g, tree, set(), w)
        return DegeneracyOutcome(
            ordering, 0, Fraction(0), len(R0), {"note": "empty request"}
        )

    try:
        coloring = proper_coloring(g, 1, mode)
        used_mode = mode
    except BrooksObstructionError:
        coloring = proper_coloring(g, 1, "greedy")
        used_mode = "greedy"
    chi_hat = len(set(coloring.values()))
    classes: dict = {}
    for v in R:
        classes.setdefault(coloring[v], set()).add(v)
    R_prime = set(max(classes.items(), key=lambda kv: (len(kv[1]), -kv[0]))[1])

    rest = [v for v in range(g.n) if v not in R_prime]
    sub, ids = g.induced(rest)
    comps = sub.components()
    comp_of = {}
    for ci, comp in enumerate(comps):
        for i in comp:
            comp_of[ids[i]] = ci
    r_list = sorted(R_prime)
    hyper = Hypergraph.build(
        len(comps),
        [
            sorted({comp_of[u] for u in g.neighbors(r)})
            for r in r_list
        ],
    )
    chosen = hypergraph_spanning_set(hyper, delta)
    R_plus = {r_list[i] for i in chosen}
    R_pp = R_prime - R_plus
    if len(R_pp) * 1 < eps * len(R_prime):
        raise InternalInvariantError(
            f"kept {len(R_pp)} of {len(R_prime)} independent requests, "
            f"below the {eps} fraction"
        )

    keep = [v for v in range(g.n) if v not in R_pp]
    core, core_ids = g.induced(keep)
    if not core.is_connected():
        raise InternalInvariantError(
            "graph minus the kept leaves is disconnected"
        )
    core_pos = {v: i for i, v in enumerate(core_ids)}
    tree = [
        (core_ids[a], core_ids[b])
        for a, b in _spanning_tree_edges(core, core_pos[w])
    ]
    for r in sorted(R_pp):
        anchor = min(u for u in g.neighbors(r) if u not in R_pp)
        tree.append((anchor, r))

    ordering = ordering_from_tree(g, tree, R_pp, w)
    satisfied = len(ordering.first & R0)
    certified = eps / (2 * chi_hat)
    if satisfied < certified * len(R0):
        raise InternalInvariantError(
            f"{satisfied} satisfied requests fall below the certified "
            f"fraction {certified} of {len(R0)}"
        )
    trace = {
        "w": w,
        "mode": used_mode,
        "chi_hat": chi_hat,
        "epsilon": eps,
        "R_prime": sorted(R_prime),
        "R_plus": sorted(R_plus),
        "R_pp": sorted(R_pp),
    }
    return DegeneracyOutcome(ordering, satisfied, certified, len(R0), trace)


# ---------------------------------------------------------------------------
# Exact game connectivity by brute force


def _connected_mask(adj_masks: list, mask: int) -> bool:
    if mask == 0:
        return False
    start = (mask & -mask).bit_length() - 1
    seen = 1 << start
    stack = [start]
    while stack:
        v = stack.pop()
        new = adj_masks[v] & mask & ~seen
        while new:
            b = new & -new
            seen |= b
            stack.append(b.bit_length() - 1)
            new &= ~b
    return seen == mask


def exact_game_connectivity(g: Graph, cap: int = 16) -> tuple:
    """Worst case over requested sets of the best removable fraction.

    A subset is removable when the rest of the graph stays connected and
    every removed vertex keeps an outside neighbor.  Returns the value
    and one minimizing requested set.
    """
    g.require_connected()
    n = g.n
    if n > cap:
        raise BudgetExceededError(f"exact search capped at {cap} vertices, got {n}")
    if n == 0:
        raise PreconditionError("empty graph")
    adj_masks = [
        sum(1 << u for u in g.neighbors(v)) for v in range(n)
    ]
    full = (1 << n) - 1
    valid = [False] * (1 << n)
    valid[0] = True
    for m in range(1, 1 << n):
        rest = full & ~m
        if rest == 0 or not _connected_mask(adj_masks, rest):
            continue
        ok = True
        mm = m
        while mm:
            b = mm & -mm
            v = b.bit_length() - 1
            if not (adj_masks[v] & rest):
                ok = False
                break
            mm &= ~b
        valid[m] = ok
    best = [0] * (1 << n)
    for m in range(1, 1 << n):
        pc = m.bit_count()
        if valid[m]:
            best[m] = pc
        mm = m
        hi = 0
        while mm:
            b = mm & -mm
            hi = max(hi, best[m & ~b])
            mm &= ~b
        best[m] = max(best[m], hi)
    kappa = None
    witness = None
    for m in range(1, 1 << n):
        val = Fraction(best[m], m.bit_count())
        if kappa is None or val < kappa:
            kappa = val
            witness = m
    ws = tuple(v for v in range(n) if witness >> v & 1)
    return kappa, ws


def removable_ratio(g: Graph, R: Iterable[int]) -> Fraction:
    """Best fraction of R removable while keeping the rest connected and
    every removed vertex anchored outside.  Searches subsets of R only."""
    from itertools import combinations

    g.require_connected()
    R = sorted(set(R))
    if not R:
        raise PreconditionError("requested set must be non-empty")
    for size in range(len(R), 0, -1):
        for sub in combinations(R, size):
            rest = [v for v in range(g.n) if v not in sub]
            if not rest:
                continue
            rg, _ = g.induced(rest)
            if not rg.is_connected():
                continue
            outside = set(rest)
            if all(any(u in outside for u in g.neighbors(v)) for v in sub):
                return Fraction(size, len(R))
    return Fraction(0)


def leaf_ratio(g: Graph, R: Iterable[int]) -> Fraction:
    """Best fraction of R realizable as leaves of a spanning tree,
    by enumerating spanning trees outright."""
    R = set(R)
    if not R:
        raise PreconditionError("requested set must be non-empty")
    best = 0
    for leaves in _leaf_sets(g):
        best = max(best, len(R & leaves))
    return Fraction(best, len(R))


def _leaf_sets(g: Graph) -> set:
    """Leaf sets of all spanning trees (deduplicated)."""
    from itertools import combinations

    if g.n == 1:
        return {frozenset([0])}
    out = set()
    edges = g.edges
    for subset in combinations(range(len(edges)), g.n - 1):
        uf = _UnionFind(g.n)
        ok = True
        deg = [0] * g.n
        for i in subset:
            u, v = edges[i]
            if not uf.union(u, v):
                ok = False
                break
            deg[u] += 1
            deg[v] += 1
        if ok:
            out.add(frozenset(v for v in range(g.n) if deg[v] == 1))
    return out


def game_connectivity_by_trees(g: Graph, cap: int = 8) -> Fraction:
    """Spanning-tree formulation of game connectivity, for cross-checks."""
    g.require_connected()
    if g.n > cap:
        raise BudgetExceededError(f"tree enumeration capped at {cap} vertices")
    masks = [sum(1 << v for v in ls) for ls in _leaf_sets(g)]
    kappa = None
    for m in range(1, 1 << g.n):
        best = max((m & lm).bit_count() for lm in masks)
        val = Fraction(best, m.bit_count())
        if kappa is None or val < kappa:
            kappa = val
    return kappa
