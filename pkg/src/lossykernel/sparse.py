"""Projections, closures, exchange cores, tree closure and weak colouring numbers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError, ResourceError
from .graph import (
    INF,
    Graph,
    bfs_distances,
    check_vertices,
    components,
    dominated,
)
from .oracles import N_CAP, exact_steiner_tree

WORK_CAP = 5_000_000
WCOL_N_CAP = 9


@dataclass(frozen=True)
class Projection:
    u: int
    X: frozenset
    M: frozenset
    r: int


@dataclass(frozen=True)
class ProjectionProfile:
    u: int
    A: frozenset
    rho: dict  # vertex of A -> distance in 1..r, or INF

    def key(self) -> tuple:
        """Canonical form: sorted (core vertex, distance) pairs with finite distance."""
        return tuple(sorted((v, d) for v, d in self.rho.items() if d != INF))


@dataclass(frozen=True)
class OrderedGraph:
    graph: Graph
    order: tuple

    def __post_init__(self):
        if sorted(self.order) != list(range(self.graph.n)):
            raise InputError("order must be a permutation of the vertices")
        object.__setattr__(self, "order", tuple(self.order))

    def position(self) -> list[int]:
        pos = [0] * self.graph.n
        for i, v in enumerate(self.order):
            pos[v] = i
        return pos


def _avoiding(g: Graph, u: int, X: frozenset, r: int) -> dict:
    if u in X:
        raise InputError(f"vertex {u} belongs to the target set")
    return bfs_distances(g, [u], avoid=X, cap=r)


def projection(g: Graph, u: int, X: Iterable[int], r: int) -> Projection:
    """Vertices of X reachable from u by a path of length <= r with no internal vertex in X."""
    X = check_vertices(g, X)
    dist = _avoiding(g, u, X, r)
    return Projection(u, X, frozenset(v for v in dist if v in X), r)


def profile(g: Graph, u: int, A: Iterable[int], r: int) -> ProjectionProfile:
    A = check_vertices(g, A)
    dist = _avoiding(g, u, A, r)
    return ProjectionProfile(u, A, {v: dist.get(v, INF) for v in sorted(A)})


def max_projection_size(g: Graph, X: Iterable[int], r: int) -> int:
    X = frozenset(X)
    return max((len(projection(g, u, X, r).M) for u in range(g.n) if u not in X), default=0)


def closure(g: Graph, X: Iterable[int], r: int, target: int = 2, budget: int | None = None) -> frozenset:
    """Greedily grow X until every outside vertex projects onto at most `target` vertices.

    Each round looks at the outside vertices whose projection is too large and
    adds the outside vertex lying closest (distance < r, X-avoiding) to the most
    of them; an oversized vertex always counts for itself, so progress is
    guaranteed. Stops early once `budget` vertices have been added.
    """
    Xp = set(check_vertices(g, X))
    added = 0
    while budget is None or added < budget:
        frozen = frozenset(Xp)
        counts: dict[int, int] = {}
        for u in range(g.n):
            if u in frozen:
                continue
            dist = _avoiding(g, u, frozen, r)
            if sum(1 for v in dist if v in frozen) <= target:
                continue
            for w, d in dist.items():
                if w not in frozen and d < r:
                    counts[w] = counts.get(w, 0) + 1
        if not counts:
            break
        w = min(counts, key=lambda x: (-counts[x], x))
        Xp.add(w)
        added += 1
    return frozenset(Xp)


def closure_report(g: Graph, X: Iterable[int], r: int, target: int = 2, budget: int | None = None) -> dict:
    X = frozenset(X)
    Xp = closure(g, X, r, target, budget)
    return {
        "size_before": len(X),
        "size_after": len(Xp),
        "closure_growth": len(Xp) / len(X) if X else float(len(Xp)),
        "max_projection_before": max_projection_size(g, X, r),
        "max_projection_size": max_projection_size(g, Xp, r),
    }


# exchange cores

def _n_components(g: Graph, s) -> int:
    return len(components(g, s))


def find_exchange(g: Graph, Z: frozenset, X: frozenset, c: int, work_cap: int = WORK_CAP):
    """First (A, B) with |B| < |A| <= c such that (X - A) ∪ B dominates Z without more components.

    A runs over subsets of X by increasing size then lexicographically, B over
    subsets of V(G) likewise.
    """
    base = _n_components(g, X)
    xs = sorted(X)
    work = 0
    for a_size in range(1, min(c, len(xs)) + 1):
        for A in itertools.combinations(xs, a_size):
            rest = X - set(A)
            for b_size in range(0, a_size):
                for B in itertools.combinations(range(g.n), b_size):
                    work += 1
                    if work > work_cap:
                        raise ResourceError("exchange search exceeds work cap")
                    new = rest | set(B)
                    if Z <= dominated(g, new) and _n_components(g, new) <= base:
                        return frozenset(A), frozenset(B)
    return None


def exchange_improve(g: Graph, Z: Iterable[int], X: Iterable[int], c: int, work_cap: int = WORK_CAP):
    """Apply first-found exchanges until none applies. Returns (final set, number of steps)."""
    Z = check_vertices(g, Z)
    X = check_vertices(g, X)
    if c < 1:
        raise InputError("c must be positive")
    if not Z <= dominated(g, X):
        raise InputError("X does not dominate Z")
    steps = 0
    while True:
        ex = find_exchange(g, Z, X, c, work_cap)
        if ex is None:
            return X, steps
        A, B = ex
        new = (X - A) | B
        assert len(new) < len(X) and _n_components(g, new) <= _n_components(g, X)
        X = frozenset(new)
        steps += 1


def exchange_core_witness(g: Graph, Z: Iterable[int], c: int, k_cap: int, n_cap: int = N_CAP, work_cap: int = WORK_CAP):
    """A Z-dominator of size <= k_cap that neither dominates G nor admits an exchange, else None."""
    Z = check_vertices(g, Z)
    if g.n > n_cap:
        raise ResourceError(f"exchange core check on {g.n} vertices exceeds cap {n_cap}")
    everything = frozenset(range(g.n))
    for size in range(0, min(k_cap, g.n) + 1):
        for X in itertools.combinations(range(g.n), size):
            X = frozenset(X)
            dom = dominated(g, X)
            if not Z <= dom or dom == everything:
                continue
            if find_exchange(g, Z, X, c, work_cap) is None:
                return X
    return None


def is_exchange_core(g: Graph, Z: Iterable[int], c: int, k_cap: int, **kw) -> bool:
    return exchange_core_witness(g, Z, c, k_cap, **kw) is None


def grid_apex_witness(k: int, m: int, Z: Iterable[int], row: int, literal: bool = True) -> frozenset:
    """Small Z-dominator of grid_apex(k, m) that misses part of `row`.

    The literal form is {w_j : j != row} ∪ (Z ∩ row). When the row's core
    vertices are spread out they can dominate the whole row; the repaired form
    dominates each such core vertex from the row below or above instead (and
    keeps one row vertex when the row's apex belongs to Z).
    """
    Z = frozenset(Z)
    apex = [k * m + j for j in range(k)]
    row_vs = [row * m + j for j in range(m)]
    in_row = [v for v in row_vs if v in Z]
    if len(in_row) >= k:
        raise InputError("the chosen row holds at least k core vertices")
    D = {apex[j] for j in range(k) if j != row}
    if literal:
        return frozenset(D | set(in_row))
    if k < 2:
        raise InputError("the repaired witness needs k >= 2")
    other = row + 1 if row + 1 < k else row - 1
    keep = []
    if apex[row] in Z:
        keep = [in_row[0] if in_row else row_vs[0]]
    for v in in_row:
        if v not in keep:
            D.add(other * m + (v - row * m))
    return frozenset(D | set(keep))


# tree closure

def tree_closure(g: Graph, X: Iterable[int], q: int, r: int, closure_target: int = 2, work_cap: int = 200_000) -> frozenset:
    """Superset X' of X such that Steiner trees of at most q vertices of X with
    at most r*q vertices keep their size inside G[X'].

    X0 is the rq-closure of X; then for every set Y of at most q vertices of X0
    an optimal Steiner tree avoiding the edges of G[X0] is added when it has at
    most rq vertices.
    """
    if q < 1 or r < 1:
        raise InputError("q and r must be positive")
    X0 = closure(g, X, r * q, closure_target)
    inner = frozenset(X0)
    edges = [(u, v) for u, v in g.edges() if not (u in inner and v in inner)]
    h = Graph(g.n, edges)
    dist = {v: bfs_distances(h, [v], cap=r * q - 1) for v in sorted(X0)}
    out = set(X0)
    pool = sorted(X0)
    work = 0
    for size in range(2, q + 1):
        for Y in itertools.combinations(pool, size):
            if any(b not in dist[a] for a, b in itertools.combinations(Y, 2)):
                continue
            work += 1
            if work > work_cap:
                raise ResourceError("tree closure enumeration exceeds work cap")
            res = exact_steiner_tree(h, Y)
            if res.size <= r * q:
                out |= res.vertices
    return frozenset(out)


# weak colouring numbers

def wreach(og: OrderedGraph, v: int, s: int) -> frozenset:
    """Vertices u reachable from v by a path of length <= s on which u is the L-minimum."""
    g = og.graph
    pos = og.position()
    out = {v}
    for u in range(g.n):
        if pos[u] >= pos[v]:
            continue
        allowed = [w for w in range(g.n) if pos[w] < pos[u]]
        dist = bfs_distances(g, [v], avoid=(), cap=s) if not allowed else _restricted_bfs(g, v, set(allowed), s)
        if u in dist:
            out.add(u)
    return frozenset(out)


def _restricted_bfs(g: Graph, v: int, banned: set, s: int) -> dict:
    dist = {v: 0}
    frontier = [v]
    for d in range(1, s + 1):
        nxt = []
        for x in frontier:
            for w in g.adj[x]:
                if w not in dist and w not in banned:
                    dist[w] = d
                    nxt.append(w)
        frontier = nxt
    return dist


def wcol_of_order(g: Graph, order: Sequence[int], s: int) -> int:
    og = OrderedGraph(g, tuple(order))
    return max((len(wreach(og, v, s)) for v in range(g.n)), default=0)


def _greedy_order(g: Graph) -> list[int]:
    """Degeneracy order: repeatedly strip a minimum-degree vertex and put it last."""
    deg = [g.degree(v) for v in range(g.n)]
    alive = set(range(g.n))
    tail = []
    while alive:
        v = min(alive, key=lambda x: (deg[x], x))
        alive.remove(v)
        tail.append(v)
        for w in g.adj[v]:
            if w in alive:
                deg[w] -= 1
    return tail[::-1]


def wcol(g: Graph, s: int, mode: str = "exact", n_cap: int = WCOL_N_CAP):
    """(value, witness order) for the weak s-colouring number.

    Exact mode searches orders left to right: when u is placed, it is weakly
    reachable from exactly those later vertices within distance s of u in the
    graph induced by u and the still unplaced vertices, so partial orders carry
    running counts and are cut off once they cannot beat the best order found.
    """
    if s < 0:
        raise InputError("s must be non-negative")
    start = _greedy_order(g)
    best_val = wcol_of_order(g, start, s)
    if mode == "greedy":
        return best_val, tuple(start)
    if mode != "exact":
        raise InputError(f"unknown mode {mode!r}")
    if g.n > n_cap:
        raise ResourceError(f"exact wcol on {g.n} vertices exceeds cap {n_cap}")
    best = [best_val, tuple(start)]
    seen: dict = {}
    everyone = set(range(g.n))

    def search(prefix, rest, counts, placed_max):
        if not rest:
            if placed_max < best[0]:
                best[0], best[1] = placed_max, tuple(prefix)
            return
        key = (rest, tuple(counts[v] for v in sorted(rest)))
        if seen.get(key, INF) <= placed_max:
            return
        seen[key] = placed_max
        for u in sorted(rest):
            reach = _restricted_bfs(g, u, everyone - rest, s)
            new = dict(counts)
            for w in reach:
                if w != u:
                    new[w] += 1
            remaining = rest - {u}
            if max((new[w] for w in remaining), default=0) + 1 >= best[0]:
                continue
            top = max(placed_max, counts[u] + 1)
            if top >= best[0]:
                continue
            search(prefix + [u], remaining, new, top)

    search([], frozenset(everyone), {v: 0 for v in range(g.n)}, 0)
    return best[0], best[1]


def all_orders_wcol(g: Graph, s: int) -> int:
    """Exact wcol by trying every permutation; the independent slow route."""
    return min(wcol_of_order(g, order, s) for order in itertools.permutations(range(g.n)))


def weak_reach_union(og: OrderedGraph, X: Iterable[int], r: int) -> frozenset:
    out = set()
    for x in X:
        out |= wreach(og, x, r)
    return frozenset(out)


def simple_paths_upto(g: Graph, start: int, length: int):
    """All simple paths starting at `start` with at most `length` edges."""
    stack = [(start,)]
    while stack:
        p = stack.pop()
        yield p
        if len(p) - 1 < length:
            for w in g.adj[p[-1]]:
                if w not in p:
                    stack.append(p + (w,))


def wcol_separator_check(og: OrderedGraph, X: Iterable[int], y: int, r: int) -> bool:
    """Every path of length <= r from X to y contains a vertex weakly r-reachable from both X and y."""
    X = frozenset(X)
    wx = weak_reach_union(og, X, r)
    wy = wreach(og, y, r)
    common = wx & wy
    for p in simple_paths_upto(og.graph, y, r):
        if p[-1] in X and not (set(p) & common):
            return False
    return True


def diagnostics(g: Graph, X: Iterable[int], r: int = 1, s: int = 1, c: int = 2, Z=None, target: int = 2) -> dict:
    """Measured structural quantities for regression tracking."""
    X = frozenset(X)
    rep = closure_report(g, X, r, target)
    steps = 0
    if Z is not None:
        _, steps = exchange_improve(g, Z, X, c)
    return {
        "max_projection_size": rep["max_projection_size"],
        "closure_growth": rep["closure_growth"],
        "wcol_greedy": wcol(g, s, mode="greedy")[0],
        "exchange_steps": steps,
    }
