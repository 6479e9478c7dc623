"""Instance serialization, fixture generators, and random families.

The on-disk format is line oriented and canonical: serializing a parsed
document reproduces it byte for byte.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .errors import FormatError, PreconditionError
from .graph import Graph, KTreeOrder, TreedepthForest, validate_ktree_order
from .listcolor import Request, validate_lists
from .oracle import optimal_satisfaction

FORMAT_HEADER = "flexicolor-instance 1"


@dataclass
class InstanceFile:
    g: Graph
    L: dict
    request: Optional[Request] = None
    ktree: Optional[KTreeOrder] = None
    forest: Optional[TreedepthForest] = None
    name: str = ""
    seed: Optional[int] = None

    def validate(self) -> None:
        validate_lists(self.g, self.L)
        if self.request is not None:
            self.request.validate(self.g, self.L)
        if self.ktree is not None:
            bad = validate_ktree_order(self.g, self.ktree)
            if bad is not None:
                raise PreconditionError(
                    f"order invalid at position {bad.index}: {bad.message}"
                )
        if self.forest is not None:
            self.forest.validate(self.g)


def _fmt_weight(w) -> str:
    f = Fraction(w)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def serialize(inst: InstanceFile) -> str:
    inst.validate()
    lines = [FORMAT_HEADER]
    if inst.name:
        lines.append(f"name {inst.name}")
    if inst.seed is not None:
        lines.append(f"seed {inst.seed}")
    lines.append(f"vertices {inst.g.n}")
    for u, v in sorted(inst.g.edges):
        lines.append(f"edge {u} {v}")
    for v in range(inst.g.n):
        cols = " ".join(str(c) for c in sorted(inst.L[v]))
        lines.append(f"list {v} {cols}")
    if inst.ktree is not None:
        lines.append(f"ktree {inst.ktree.k}")
        lines.append("order " + " ".join(str(v) for v in inst.ktree.sequence))
    if inst.forest is not None:
        lines.append(
            "td-parent "
            + " ".join(str(p if p is not None else -1) for p in inst.forest.parent)
        )
    r = inst.request
    if r is not None:
        lines.append(f"request-kind {r.kind}")
        if r.kind == "unweighted":
            for v in sorted(r.prefs):
                lines.append(f"request {v} {r.prefs[v]}")
        elif r.kind == "unique":
            for v in sorted(r.prefs):
                lines.append(
                    f"request {v} {r.prefs[v]} {_fmt_weight(r.weights[v])}"
                )
        else:
            for (v, c) in sorted(r.table):
                lines.append(f"request {v} {c} {_fmt_weight(r.table[(v, c)])}")
    return "\n".join(lines) + "\n"


def _parse_int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"{what} must be an integer, got {tok!r}", line=lineno)


def _parse_weight(tok: str, lineno: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"bad weight {tok!r}", line=lineno)


def parse(text: str) -> InstanceFile:
    """Strict parser; sections must appear in canonical order."""
    lines = text.splitlines()
    if not lines or lines[0] != FORMAT_HEADER:
        raise FormatError(f"missing header {FORMAT_HEADER!r}", line=1)
    name = ""
    seed: Optional[int] = None
    n: Optional[int] = None
    edges: list = []
    L: dict = {}
    ktree: Optional[KTreeOrder] = None
    kt_k: Optional[int] = None
    forest: Optional[TreedepthForest] = None
    kind: Optional[str] = None
    prefs: dict = {}
    weights: dict = {}
    table: dict = {}
    # section ranks keep the canonical order enforceable
    RANKS = {
        "name": 1,
        "seed": 2,
        "vertices": 3,
        "edge": 4,
        "list": 5,
        "ktree": 6,
        "order": 7,
        "td-parent": 8,
        "request-kind": 9,
        "request": 10,
    }
    rank = 0
    for i, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            raise FormatError("blank line not allowed", line=i)
        toks = raw.split(" ")
        key = toks[0]
        if key not in RANKS:
            raise FormatError(f"unknown key {key!r}", line=i)
        if RANKS[key] < rank:
            raise FormatError(f"key {key!r} out of order", line=i)
        rank = RANKS[key]
        args = toks[1:]
        if key == "name":
            if len(args) != 1 or not args[0]:
                raise FormatError("name takes one token", line=i)
            name = args[0]
        elif key == "seed":
            if len(args) != 1:
                raise FormatError("seed takes one integer", line=i)
            seed = _parse_int(args[0], i, "seed")
        elif key == "vertices":
            if len(args) != 1:
                raise FormatError("vertices takes one integer", line=i)
            n = _parse_int(args[0], i, "vertex count")
            if n <= 0:
                raise FormatError("vertex count must be positive", line=i)
        elif key == "edge":
            if n is None:
                raise FormatError("edge before vertices", line=i)
            if len(args) != 2:
                raise FormatError("edge takes two endpoints", line=i)
            u, v = (_parse_int(a, i, "endpoint") for a in args)
            if not (0 <= u < v < n):
                raise FormatError(
                    f"edge ({u},{v}) must satisfy 0 <= u < v < {n}", line=i
                )
            if (u, v) in edges:
                raise FormatError(f"duplicate edge ({u},{v})", line=i)
            edges.append((u, v))
        elif key == "list":
            if n is None:
                raise FormatError("list before vertices", line=i)
            if len(args) < 2:
                raise FormatError("list needs a vertex and colors", line=i)
            v = _parse_int(args[0], i, "list vertex")
            if not (0 <= v < n):
                raise FormatError(f"list vertex {v} out of range", line=i)
            if v in L:
                raise FormatError(f"duplicate list for vertex {v}", line=i)
            cols = [_parse_int(a, i, "color") for a in args[1:]]
            if cols != sorted(set(cols)):
                raise FormatError(
                    f"colors of vertex {v} must be strictly increasing", line=i
                )
            L[v] = set(cols)
        elif key == "ktree":
            if len(args) != 1:
                raise FormatError("ktree takes one integer", line=i)
            kt_k = _parse_int(args[0], i, "ktree parameter")
        elif key == "order":
            if kt_k is None:
                raise FormatError("order requires a preceding ktree line", line=i)
            seq = tuple(_parse_int(a, i, "order entry") for a in args)
            if sorted(seq) != list(range(n or 0)):
                raise FormatError("order is not a vertex permutation", line=i)
            ktree = KTreeOrder(kt_k, seq)
        elif key == "td-parent":
            if n is None or len(args) != n:
                raise FormatError(
                    f"td-parent needs exactly {n} entries", line=i
                )
            ps = [_parse_int(a, i, "parent") for a in args]
            forest = TreedepthForest(
                tuple(None if p == -1 else p for p in ps)
            )
        elif key == "request-kind":
            if len(args) != 1 or args[0] not in ("unweighted", "unique", "weighted"):
                raise FormatError("unknown request kind", line=i)
            kind = args[0]
        elif key == "request":
            if kind is None:
                raise FormatError("request before request-kind", line=i)
            if kind == "unweighted":
                if len(args) != 2:
                    raise FormatError("request takes vertex and color", line=i)
                v, c = (_parse_int(a, i, "request field") for a in args)
                if v in prefs:
                    raise FormatError(f"duplicate request at vertex {v}", line=i)
                prefs[v] = c
            else:
                if len(args) != 3:
                    raise FormatError(
                        "request takes vertex, color and weight", line=i
                    )
                v = _parse_int(args[0], i, "request vertex")
                c = _parse_int(args[1], i, "request color")
                w = _parse_weight(args[2], i)
                if kind == "unique":
                    if v in prefs:
                        raise FormatError(
                            f"duplicate request at vertex {v}", line=i
                        )
                    prefs[v] = c
                    weights[v] = w
                else:
                    if (v, c) in table:
                        raise FormatError(
                            f"duplicate request at ({v},{c})", line=i
                        )
                    table[(v, c)] = w
    if n is None:
        raise FormatError("missing vertices line")
    if set(L) != set(range(n)):
        missing = sorted(set(range(n)) - set(L))
        raise FormatError(f"missing lists for vertices {missing}")
    if ktree is None and kt_k is not None:
        raise FormatError("ktree line without an order line")
    try:
        g = Graph(n, edges)
    except PreconditionError as exc:
        raise FormatError(str(exc))
    request = None
    if kind == "unweighted":
        request = Request("unweighted", prefs=prefs)
    elif kind == "unique":
        request = Request("unique", prefs=prefs, weights=weights)
    elif kind == "weighted":
        request = Request("weighted", table=table)
    inst = InstanceFile(g, L, request, ktree, forest, name, seed)
    try:
        inst.validate()
    except PreconditionError as exc:
        raise FormatError(str(exc))
    return inst


def parse_dimacs(text: str) -> Graph:
    """Edge-list graphs: a "p edge n m" header then "e u v" lines with
    1-based ids."""
    n = None
    m = None
    edges = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        toks = line.split()
        if toks[0] == "p":
            if n is not None:
                raise FormatError("second problem line", line=i)
            if len(toks) != 4 or toks[1] != "edge":
                raise FormatError("problem line must be 'p edge n m'", line=i)
            n = _parse_int(toks[2], i, "vertex count")
            m = _parse_int(toks[3], i, "edge count")
        elif toks[0] == "e":
            if n is None:
                raise FormatError("edge before problem line", line=i)
            if len(toks) != 3:
                raise FormatError("edge line must be 'e u v'", line=i)
            u = _parse_int(toks[1], i, "endpoint") - 1
            v = _parse_int(toks[2], i, "endpoint") - 1
            if not (0 <= u < n and 0 <= v < n):
                raise FormatError(f"endpoint out of range on line {i}", line=i)
            edges.append((u, v))
        else:
            raise FormatError(f"unknown line type {toks[0]!r}", line=i)
    if n is None:
        raise FormatError("missing problem line")
    if m is not None and m != len(edges):
        raise FormatError(f"header announces {m} edges, found {len(edges)}")
    try:
        return Graph(n, edges)
    except PreconditionError as exc:
        raise FormatError(str(exc))


# ---------------------------------------------------------------------------
# Fixtures


def fig_cycle() -> InstanceFile:
    """Ten-cycle with size-2 lists on which no request is satisfiable.

    Eight vertices carry the drawn lists and requests; the two remaining
    ones get the smallest completion (by list pair, then requested
    colors) that keeps the exact optimum at zero.
    """
    g = Graph(10, [(i, (i + 1) % 10) for i in range(10)])
    L = {
        0: {1, 2},
        1: {2, 3},
        2: {1, 3},
        3: {1, 2},
        4: {1, 2},
        7: {1, 2},
        8: {1, 2},
        9: {1, 2},
    }
    prefs = {0: 2, 3: 1, 4: 2, 7: 1, 8: 2, 9: 1}
    palette_pairs = [set(p) for p in combinations((1, 2, 3), 2)]
    for l5 in palette_pairs:
        for c5 in sorted(l5):
            for l6 in palette_pairs:
                for c6 in sorted(l6):
                    trial_L = {**L, 5: l5, 6: l6}
                    trial = Request(
                        "unweighted", prefs={**prefs, 5: c5, 6: c6}
                    )
                    if optimal_satisfaction(g, trial_L, trial).optimum == 0:
                        return InstanceFile(
                            g, trial_L, trial, name="fig-cycle"
                        )
    raise PreconditionError("no zero-optimum completion exists")


def fig_diamond() -> InstanceFile:
    """Diamond with degree-sized lists where no request is satisfiable."""
    g = Graph(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])
    L = {0: {1, 2}, 1: {1, 2, 3}, 2: {1, 2, 3}, 3: {1, 3}}
    request = Request("unweighted", prefs={0: 2, 1: 1, 2: 1, 3: 3})
    return InstanceFile(g, L, request, name="fig-diamond")


# 1-based neighbor table of the drawn 3-tree, vertex i+1 -> id i
_FIG_3TREE_ADJ = {
    1: (2, 3, 4),
    2: (1, 3, 4, 5, 6),
    3: (1, 2, 4, 5),
    4: (1, 2, 3, 5, 6, 7, 8),
    5: (2, 3, 4, 6, 7, 8),
    6: (2, 4, 5, 7, 8),
    7: (4, 5, 6),
    8: (4, 5, 6),
}


def fig_3tree(L: Optional[dict] = None) -> InstanceFile:
    """Eight-vertex 3-tree used for the subset-family walkthrough."""
    edges = sorted(
        {
            (min(a, b) - 1, max(a, b) - 1)
            for a, nbrs in _FIG_3TREE_ADJ.items()
            for b in nbrs
        }
    )
    g = Graph(8, edges)
    if L is None:
        L = {v: {1, 2, 3, 4} for v in range(8)}
    inst = InstanceFile(
        g, L, ktree=KTreeOrder(3, tuple(range(8))), name="fig-3tree"
    )
    inst.validate()
    return inst


def fig_triplet_cover() -> InstanceFile:
    """Five core vertices plus one vertex per 3-subset of them.

    Removing any three core vertices disconnects the graph, so at most
    two of the five can ever be spanning-tree leaves.
    """
    edges = []
    for i, trip in enumerate(combinations(range(5), 3)):
        for r in trip:
            edges.append((r, 5 + i))
    g = Graph(15, edges)
    L = {v: {1, 2, 3} for v in range(15)}
    return InstanceFile(g, L, name="fig-triplet-cover")


def two_cliques_matching(delta: int = 3) -> InstanceFile:
    """Two copies of K_delta joined by a perfect matching, color 1
    requested on all of one clique; at most one request is satisfiable."""
    if delta < 3:
        raise PreconditionError(f"clique size must be >= 3, got {delta}")
    edges = []
    for a, b in combinations(range(delta), 2):
        edges.append((a, b))
        edges.append((delta + a, delta + b))
    for a in range(delta):
        edges.append((a, delta + a))
    g = Graph(2 * delta, edges)
    L = {v: set(range(1, delta + 1)) for v in range(2 * delta)}
    request = Request("unweighted", prefs={v: 1 for v in range(delta)})
    return InstanceFile(g, L, request, name=f"two-cliques-{delta}")


FIXTURES = {
    "fig-cycle": fig_cycle,
    "fig-diamond": fig_diamond,
    "fig-3tree": fig_3tree,
    "fig-triplet-cover": fig_triplet_cover,
    "two-cliques-matching": two_cliques_matching,
}


# ---------------------------------------------------------------------------
# Random families


def _random_request(
    g: Graph, L: dict, rng: random.Random, kind: str, size: Optional[int] = None
) -> Request:
    if size is None:
        size = rng.randint(1, g.n)
    vs = rng.sample(range(g.n), size)
    if kind == "unweighted":
        return Request(
            "unweighted", prefs={v: rng.choice(sorted(L[v])) for v in vs}
        )
    if kind == "unique":
        return Request(
            "unique",
            prefs={v: rng.choice(sorted(L[v])) for v in vs},
            weights={v: Fraction(rng.randint(1, 10)) for v in vs},
        )
    table = {}
    for v in vs:
        for c in sorted(L[v]):
            if rng.random() < 0.5:
                table[(v, c)] = Fraction(rng.randint(0, 10))
    if not table:
        v = vs[0]
        table[(v, sorted(L[v])[0])] = Fraction(1)
    return Request("weighted", table=table)


def random_bounded_degree(
    seed: int,
    n: int,
    delta: int,
    palette: int = 0,
    request_kind: str = "unweighted",
    request_size: Optional[int] = None,
) -> InstanceFile:
    """Connected graph with maximum degree exactly delta (never the
    complete graph on delta+1 vertices), minimum admissible lists, and a
    random request."""
    if delta < 3:
        raise PreconditionError(f"maximum degree must be >= 3, got {delta}")
    if n < delta + 1:
        raise PreconditionError(
            f"need at least {delta + 1} vertices to reach degree {delta}"
        )
    rng = random.Random(seed)
    palette = palette or delta + 2
    while True:
        deg = [0] * n
        edges = set()
        order = list(range(1, n))
        rng.shuffle(order)
        stuck = False
        for v in order:
            candidates = [u for u in range(v) if deg[u] < delta]
            if not candidates:
                stuck = True
                break
            u = rng.choice(candidates)
            edges.add((min(u, v), max(u, v)))
            deg[u] += 1
            deg[v] += 1
        if stuck:
            continue
        extras = rng.randint(0, n)
        for _ in range(extras):
            u, v = rng.sample(range(n), 2)
            e = (min(u, v), max(u, v))
            if e in edges or deg[u] >= delta or deg[v] >= delta:
                continue
            edges.add(e)
            deg[u] += 1
            deg[v] += 1
        g = Graph(n, sorted(edges))
        if g.max_degree() != delta:
            continue
        if g.n == delta + 1 and g.is_complete():
            continue
        if not g.is_connected():
            continue
        break
    L = {}
    for v in range(n):
        size = delta if g.degree(v) == delta else g.degree(v) + 1
        L[v] = set(rng.sample(range(1, palette + 1), size))
    request = _random_request(g, L, rng, request_kind, request_size)
    return InstanceFile(
        g, L, request, name=f"random-bounded-{delta}", seed=seed
    )


def random_ktree(
    seed: int,
    n: int,
    k: int,
    list_size: Optional[int] = None,
    palette: int = 0,
    request_kind: str = "unique",
    request_size: Optional[int] = None,
) -> InstanceFile:
    """Random k-tree with its construction order and (k+1)-sized lists."""
    if n < k + 1:
        raise PreconditionError(f"a {k}-tree needs at least {k + 1} vertices")
    rng = random.Random(seed)
    edges = [(a, b) for a, b in combinations(range(k + 1), 2)]
    cliques = [tuple(range(k + 1))]
    for c in combinations(range(k + 1), k):
        cliques.append(tuple(c))
    for v in range(k + 1, n):
        base = rng.choice([c for c in cliques if len(c) == k])
        for u in base:
            edges.append((u, v))
        for sub in combinations(base, k - 1):
            cliques.append(tuple(sorted(sub + (v,))))
    g = Graph(n, edges)
    order = KTreeOrder(k, tuple(range(n)))
    list_size = list_size or k + 1
    palette = palette or list_size + 2
    L = {
        v: set(rng.sample(range(1, palette + 1), list_size)) for v in range(n)
    }
    inst = InstanceFile(g, L, ktree=order, name=f"random-{k}tree", seed=seed)
    inst.validate()
    if request_kind:
        inst.request = _random_request(g, L, rng, request_kind, request_size)
    return inst


def random_treedepth(
    seed: int,
    n: int,
    height: int,
    palette: int = 0,
    request_kind: str = "unique",
    request_size: Optional[int] = None,
) -> InstanceFile:
    """Random rooted forest of bounded height with a random subgraph of
    its ancestor closure, lists of the height's size."""
    if height < 1:
        raise PreconditionError(f"height must be >= 1, got {height}")
    rng = random.Random(seed)
    parent: list = []
    depth = []
    for v in range(n):
        shallow = [u for u in range(v) if depth[u] < height - 1]
        if v == 0 or not shallow or rng.random() < 0.2:
            parent.append(None)
            depth.append(0)
        else:
            p = rng.choice(shallow)
            parent.append(p)
            depth.append(depth[p] + 1)
    edges = []
    for v in range(n):
        u = parent[v]
        chain = []
        while u is not None:
            chain.append(u)
            u = parent[u]
        for u in chain:
            if parent[v] == u or rng.random() < 0.5:
                edges.append((min(u, v), max(u, v)))
    g = Graph(n, sorted(set(edges)))
    forest = TreedepthForest(tuple(parent))
    k = forest.height()
    palette = palette or k + 3
    L = {v: set(rng.sample(range(1, palette + 1), k)) for v in range(n)}
    inst = InstanceFile(g, L, forest=forest, name="random-treedepth", seed=seed)
    inst.validate()
    if request_kind:
        inst.request = _random_request(g, L, rng, request_kind, request_size)
    return inst


def random_three_connected(
    seed: int, n: int, request_size: Optional[int] = None
) -> InstanceFile:
    """Circular ladder plus a few chords: 3-connected, maximum degree 4,
    never regular.  Vertex count must be even and at least 8."""
    if n % 2 or n < 8:
        raise PreconditionError(
            f"family needs an even vertex count >= 8, got {n}"
        )
    rng = random.Random(seed)
    m = n // 2
    edges = set()
    for i in range(m):
        edges.add((min(i, (i + 1) % m), max(i, (i + 1) % m)))
        edges.add(
            (min(m + i, m + (i + 1) % m), max(m + i, m + (i + 1) % m))
        )
        edges.add((i, m + i))
    deg = {v: 3 for v in range(n)}
    chords = rng.randint(1, 3)
    added = 0
    while added < chords:
        u, v = rng.sample(range(n), 2)
        e = (min(u, v), max(u, v))
        if e in edges or deg[u] >= 4 or deg[v] >= 4:
            continue
        edges.add(e)
        deg[u] += 1
        deg[v] += 1
        added += 1
    g = Graph(n, sorted(edges))
    L = {v: set(range(1, g.max_degree() + 1)) for v in range(n)}
    inst = InstanceFile(g, L, name="random-3connected", seed=seed)
    if request_size is None:
        request_size = rng.randint(1, n)
    vs = sorted(rng.sample(range(n), request_size))
    inst.request = Request(
        "unweighted", prefs={v: sorted(L[v])[0] for v in vs}
    )
    return inst


FAMILIES = {
    "bounded-degree": random_bounded_degree,
    "ktree": random_ktree,
    "treedepth": random_treedepth,
    "three-connected": random_three_connected,
}
