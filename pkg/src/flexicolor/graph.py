"""Simple undirected graphs and the structural decompositions the solvers
rely on: block-cut trees, k-tree orders, treedepth forests, power-graph
colorings and independent request subsets.

Vertices are dense integers 0..n-1.  All values are immutable after
construction; every tie-break is by smallest vertex id or smallest color.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import (
    DisconnectedGraphError,
    InternalInvariantError,
    PreconditionError,
)


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1."""

    __slots__ = ("n", "_adj", "_edges")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise PreconditionError(f"vertex count must be non-negative, got {n}")
        seen: set[tuple[int, int]] = set()
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise PreconditionError(f"loop at vertex {u} not allowed")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise PreconditionError(f"parallel edge ({e[0]},{e[1]}) not allowed")
            seen.add(e)
            adj[u].append(v)
            adj[v].append(u)
        self.n = n
        self._edges = tuple(sorted(seen))
        self._adj = tuple(tuple(sorted(nbrs)) for nbrs in adj)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    @property
    def m(self) -> int:
        return len(self._edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def vertices(self) -> range:
        return range(self.n)

    def components(self) -> list[list[int]]:
        """Connected components, each sorted, ordered by smallest vertex."""
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            comp = []
            stack = [s]
            seen[s] = True
            while stack:
                v = stack.pop()
                comp.append(v)
                for u in self._adj[v]:
                    if not seen[u]:
                        seen[u] = True
                        stack.append(u)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def require_connected(self) -> None:
        comps = self.components()
        if len(comps) > 1:
            raise DisconnectedGraphError(comps[0], comps[1])

    def bfs_distances(self, source: int) -> list[int]:
        """Distances from source; unreachable vertices get -1."""
        dist = [-1] * self.n
        dist[source] = 0
        q = deque([source])
        while q:
            v = q.popleft()
            for u in self._adj[v]:
                if dist[u] < 0:
                    dist[u] = dist[v] + 1
                    q.append(u)
        return dist

    def power(self, d: int) -> "Graph":
        """Graph with edges between distinct vertices at distance <= d."""
        if d < 1:
            raise PreconditionError(f"power must be >= 1, got {d}")
        if d == 1:
            return self
        edges = []
        for s in range(self.n):
            dist = [-1] * self.n
            dist[s] = 0
            q = deque([s])
            while q:
                v = q.popleft()
                if dist[v] == d:
                    continue
                for u in self._adj[v]:
                    if dist[u] < 0:
                        dist[u] = dist[v] + 1
                        q.append(u)
            for t in range(s + 1, self.n):
                if dist[t] > 0:
                    edges.append((s, t))
        return Graph(self.n, edges)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph; returns (graph, original ids by new id)."""
        ids = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(ids)}
        edges = [
            (pos[u], pos[v])
            for u, v in self._edges
            if u in pos and v in pos
        ]
        return Graph(len(ids), edges), ids

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def is_cycle(self) -> bool:
        return (
            self.n >= 3
            and self.m == self.n
            and all(len(a) == 2 for a in self._adj)
            and self.is_connected()
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self._edges == other._edges
        )

    def __hash__(self) -> int:
        return hash((self.n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# ---------------------------------------------------------------------------
# Block-cut tree


@dataclass(frozen=True)
class Block:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    tag: str  # "clique" | "odd-cycle" | "other"
    terminal: bool


@dataclass(frozen=True)
class BlockCutTree:
    blocks: tuple[Block, ...]
    cut_vertices: frozenset[int]
    # bipartite tree edges as (block index, cut vertex)
    tree_edges: tuple[tuple[int, int], ...]

    def terminal_blocks(self) -> tuple[Block, ...]:
        return tuple(b for b in self.blocks if b.terminal)

    def all_blocks_clique_or_odd_cycle(self) -> bool:
        return all(b.tag in ("clique", "odd-cycle") for b in self.blocks)


def _classify_block(g: Graph, vertices: tuple[int, ...]) -> str:
    # Precedence clique > odd-cycle, so K3 is tagged "clique".
    k = len(vertices)
    sub, _ = g.induced(vertices)
    if sub.is_complete():
        return "clique"
    if sub.is_cycle() and k % 2 == 1:
        return "odd-cycle"
    return "other"


def block_cut_tree(g: Graph) -> BlockCutTree:
    """Blocks, cut vertices and the bipartite block-cut tree of a connected
    graph.  Iterative Hopcroft-Tarjan on the edge stack."""
    if g.n < 1:
        raise PreconditionError("graph must have at least one vertex")
    g.require_connected()
    if g.n == 1:
        blk = Block((0,), (), "clique", True)
        return BlockCutTree((blk,), frozenset(), ())

    disc = [-1] * g.n
    low = [0] * g.n
    parent = [-1] * g.n
    cut = [False] * g.n
    edge_stack: list[tuple[int, int]] = []
    raw_blocks: list[list[tuple[int, int]]] = []
    timer = 0

    for root in range(g.n):
        if disc[root] >= 0:
            continue
        root_children = 0
        stack = [(root, iter(g.neighbors(root)))]
        disc[root] = low[root] = timer
        timer += 1
        while stack:
            v, it = stack[-1]
            advanced = False
            for u in it:
                if disc[u] < 0:
                    parent[u] = v
                    if v == root:
                        root_children += 1
                    edge_stack.append((v, u))
                    disc[u] = low[u] = timer
                    timer += 1
                    stack.append((u, iter(g.neighbors(u))))
                    advanced = True
                    break
                elif u != parent[v] and disc[u] < disc[v]:
                    edge_stack.append((v, u))
                    low[v] = min(low[v], disc[u])
            if advanced:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[v])
                if low[v] >= disc[p]:
                    if p != root or root_children >= 1:
                        # pop the block delimited by edge (p, v)
                        blk = []
                        while edge_stack:
                            e = edge_stack.pop()
                            blk.append(e)
                            if e == (p, v):
                                break
                        raw_blocks.append(blk)
                    if p != root:
                        cut[p] = True
        if root_children >= 2:
            cut[root] = True

    blocks = []
    for blk_edges in raw_blocks:
        vs = tuple(sorted({x for e in blk_edges for x in e}))
        es = tuple(sorted((u, v) if u < v else (v, u) for u, v in blk_edges))
        blocks.append((vs, es))
    blocks.sort()

    cut_vertices = frozenset(v for v in range(g.n) if cut[v])
    tree_edges = []
    final_blocks = []
    for i, (vs, es) in enumerate(blocks):
        cuts_in = [v for v in vs if v in cut_vertices]
        for v in cuts_in:
            tree_edges.append((i, v))
        terminal = len(cuts_in) <= 1
        final_blocks.append(Block(vs, es, _classify_block(g, vs), terminal))
    return BlockCutTree(tuple(final_blocks), cut_vertices, tuple(tree_edges))


# ---------------------------------------------------------------------------
# Proper colorings (greedy and Brooks) and independent request subsets


class BrooksObstructionError(PreconditionError):
    """Brooks mode was asked for a complete graph or an odd cycle."""

    def __init__(self, kind: str):
        self.kind = kind
        super().__init__(f"Brooks coloring impossible: graph is a {kind}")


def _greedy_coloring(g: Graph, order: Iterable[int]) -> dict[int, int]:
    color: dict[int, int] = {}
    for v in order:
        used = {color[u] for u in g.neighbors(v) if u in color}
        c = 0
        while c in used:
            c += 1
        color[v] = c
    return color


def _decreasing_distance_order(g: Graph, root: int) -> list[int]:
    dist = g.bfs_distances(root)
    return sorted(range(g.n), key=lambda v: (-dist[v], v))


def _brooks_coloring(g: Graph) -> dict[int, int]:
    """Proper coloring with at most max_degree colors.

    Standard constructive cases: non-regular (greedy from a low-degree
    root), cut vertex (color pieces and permute to agree), and the
    2-connected case via two non-adjacent neighbors colored alike.
    """
    g.require_connected()
    delta = g.max_degree()
    if g.is_complete():
        raise BrooksObstructionError("complete graph")
    if g.is_cycle() and g.n % 2 == 1:
        raise BrooksObstructionError("odd cycle")
    if delta <= 2:
        # path or even cycle: 2-color by BFS parity
        dist = g.bfs_distances(0)
        return {v: dist[v] % 2 for v in range(g.n)}
    degs = [g.degree(v) for v in range(g.n)]
    if min(degs) < delta:
        root = min(v for v in range(g.n) if degs[v] < delta)
        return _greedy_coloring(g, _decreasing_distance_order(g, root))

    bct = block_cut_tree(g)
    if bct.cut_vertices:
        return _brooks_with_cut_vertex(g, delta, next(iter(sorted(bct.cut_vertices))))
    return _brooks_two_connected(g, delta)


def _brooks_with_cut_vertex(g: Graph, delta: int, x: int) -> dict[int, int]:
    rest, _ = g.induced([v for v in range(g.n) if v != x])
    ids = [v for v in range(g.n) if v != x]
    color: dict[int, int] = {}
    x_color: Optional[int] = None
    for comp in rest.components():
        piece_vs = [ids[i] for i in comp] + [x]
        sub, sub_ids = g.induced(piece_vs)
        # x has degree < delta inside the piece, so greedy from x works
        sub_x = sub_ids.index(x)
        piece = _greedy_coloring(sub, _decreasing_distance_order(sub, sub_x))
        if x_color is None:
            x_color = piece[sub_x]
        elif piece[sub_x] != x_color:
            a, b = piece[sub_x], x_color
            piece = {v: (b if c == a else a if c == b else c) for v, c in piece.items()}
        for i, c in piece.items():
            color[sub_ids[i]] = c
    if max(color.values()) >= delta:
        raise InternalInvariantError("cut-vertex Brooks case used too many colors")
    return color


def _brooks_two_connected(g: Graph, delta: int) -> dict[int, int]:
    # find a with non-adjacent neighbors b, c whose removal keeps g connected
    for a in range(g.n):
        nbrs = g.neighbors(a)
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                b, c = nbrs[i], nbrs[j]
                if g.has_edge(b, c):
                    continue
                rest, ids = g.induced([v for v in range(g.n) if v not in (b, c)])
                if not rest.is_connected():
                    continue
                rest_a = ids.index(a)
                order = [ids[i] for i in _decreasing_distance_order(rest, rest_a)]
                color = {b: 0, c: 0}
                for v in order:
                    used = {color[u] for u in g.neighbors(v) if u in color}
                    col = 0
                    while col in used:
                        col += 1
                    color[v] = col
                if max(color.values()) < delta:
                    return color
                raise InternalInvariantError(
                    "two-connected Brooks case used too many colors"
                )
    # theoretically unreachable for 2-connected regular non-complete
    # non-cycle graphs; exact fallback keeps the contract honest
    found = _exhaustive_k_coloring(g, delta)
    if found is None:
        raise InternalInvariantError("no Brooks triple and no exhaustive coloring")
    return found


def _exhaustive_k_coloring(g: Graph, k: int) -> Optional[dict[int, int]]:
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    color: dict[int, int] = {}

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        used = {color[u] for u in g.neighbors(v) if u in color}
        for c in range(k):
            if c not in used:
                color[v] = c
                if rec(i + 1):
                    return True
                del color[v]
        return False

    return dict(color) if rec(0) else None


def proper_coloring(g: Graph, power: int, mode: str) -> dict[int, int]:
    """Proper coloring of the power graph g^power.

    mode "greedy" processes vertices in id order and uses at most
    maxdeg+1 colors; mode "brooks" uses at most maxdeg colors and fails
    on complete graphs and odd cycles.
    """
    if power not in (1, 3):
        raise PreconditionError(f"power must be 1 or 3, got {power}")
    if mode not in ("greedy", "brooks"):
        raise PreconditionError(f"unknown coloring mode {mode!r}")
    h = g.power(power)
    if mode == "greedy":
        return _greedy_coloring(h, range(h.n))
    h.require_connected()
    coloring = _brooks_coloring(h)
    for u, v in h.edges:
        if coloring[u] == coloring[v]:
            raise InternalInvariantError(f"improper Brooks coloring at edge ({u},{v})")
    return coloring


def color_count(coloring: dict[int, int]) -> int:
    return len(set(coloring.values()))


def independent_request_subset(
    g: Graph,
    request_set: Iterable[int],
    distance: int,
    weights: Optional[dict] = None,
    mode: str = "greedy",
) -> set[int]:
    """Subset R' of the request set that is independent in g^distance.

    Takes the best color class of a proper coloring of g^distance:
    largest by count, or by total weight when weights are given.  The
    class used guarantees |R'| >= |R| / (number of colors used).
    """
    request_set = set(request_set)
    for v in request_set:
        if not (0 <= v < g.n):
            raise PreconditionError(f"request vertex {v} out of range")
    if not request_set:
        return set()
    if len(request_set) == 1:
        return set(request_set)
    coloring = proper_coloring(g, distance, mode)
    classes: dict[int, set[int]] = {}
    for v in request_set:
        classes.setdefault(coloring[v], set()).add(v)

    def score(item):
        c, vs = item
        if weights is None:
            return (len(vs), -c)
        return (sum(weights[v] for v in vs), -c)

    best = max(classes.items(), key=score)
    return set(best[1])


# ---------------------------------------------------------------------------
# k-tree orders


@dataclass(frozen=True)
class KTreeOrder:
    """Construction order of a k-tree: v_1..v_n with k back-neighbors each."""

    k: int
    sequence: tuple[int, ...]

    def position(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.sequence)}


@dataclass(frozen=True)
class OrderViolation:
    index: int  # position in the sequence (0-based), or -1 for global issues
    message: str


def validate_ktree_order(g: Graph, order: KTreeOrder) -> Optional[OrderViolation]:
    """None if the order certifies g as a k-tree, else the first violation."""
    k, seq = order.k, order.sequence
    if k < 0:
        return OrderViolation(-1, f"width {k} is negative")
    if sorted(seq) != list(range(g.n)):
        return OrderViolation(-1, "sequence is not a permutation of the vertices")
    if k == 0:
        if g.m > 0:
            u, v = g.edges[0]
            return OrderViolation(-1, f"0-tree must be edgeless but has edge ({u},{v})")
        return None
    if g.n < k:
        return OrderViolation(-1, f"need at least {k} vertices for width {k}")
    pos = order.position()
    head = seq[:k]
    for i, u in enumerate(head):
        for v in head[i + 1 :]:
            if not g.has_edge(u, v):
                return OrderViolation(
                    max(pos[u], pos[v]),
                    f"initial vertices {u} and {v} are not adjacent",
                )
    for i in range(k, g.n):
        v = seq[i]
        back = [u for u in g.neighbors(v) if pos[u] < i]
        if len(back) != k:
            return OrderViolation(
                i, f"vertex {v} has {len(back)} back-neighbors, expected {k}"
            )
        for a in range(len(back)):
            for b in range(a + 1, len(back)):
                if not g.has_edge(back[a], back[b]):
                    return OrderViolation(
                        i,
                        f"back-neighbors {back[a]} and {back[b]} of vertex {v} "
                        "are not adjacent",
                    )
    return None


def back_neighbors(g: Graph, order: KTreeOrder, v: int) -> tuple[int, ...]:
    pos = order.position()
    return tuple(u for u in g.neighbors(v) if pos[u] < pos[v])


# ---------------------------------------------------------------------------
# Treedepth forests


@dataclass(frozen=True)
class TreedepthForest:
    """Rooted forest on the vertices of a graph, closure-containing it."""

    parent: tuple[Optional[int], ...]  # parent[v] is None for roots

    def roots(self) -> tuple[int, ...]:
        return tuple(v for v, p in enumerate(self.parent) if p is None)

    def depth(self, v: int) -> int:
        d = 0
        while self.parent[v] is not None:
            v = self.parent[v]
            d += 1
        return d

    def height(self) -> int:
        """Vertices on the longest root-to-leaf path."""
        return max((self.depth(v) for v in range(len(self.parent))), default=-1) + 1

    def ancestors(self, v: int) -> set[int]:
        out = set()
        while self.parent[v] is not None:
            v = self.parent[v]
            out.add(v)
        return out

    def validate(self, g: Graph) -> None:
        if len(self.parent) != g.n:
            raise PreconditionError(
                f"forest covers {len(self.parent)} vertices, graph has {g.n}"
            )
        for v in range(g.n):
            seen = {v}
            u = self.parent[v]
            while u is not None:
                if u in seen:
                    raise PreconditionError(f"parent cycle through vertex {v}")
                seen.add(u)
                u = self.parent[u]
        for u, v in g.edges:
            if u not in self.ancestors(v) and v not in self.ancestors(u):
                raise PreconditionError(
                    f"edge ({u},{v}) joins vertices unrelated in the forest"
                )
