"""Connected distance-r domination: connected cores, the profile-preserving
subgraph G', the alpha-approximate bi-kernel and its lifting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .errors import InputError
from .framework import (
    ENUM_CAP,
    AnnotatedInstance,
    KernelOutput,
    LiftReport,
    connect_dominator,
    fallback_output,
    lift_solution,
    marked_group_steiner_trees,
    small_optimum,
    trivial_negative,
)
from .graph import INF, Graph, bfs_distances, check_vertices, is_connected, subgraph_from_edges
from .oracles import certified_core
from .sparse import profile

RCoreProvider = Callable[[Graph, int, int], Optional[Iterable[int]]]


@dataclass(frozen=True)
class ProfileClasses:
    X: frozenset
    r: int
    classes: dict  # canonical profile -> sorted member tuple

    def representatives(self) -> dict:
        return {key: members[0] for key, members in self.classes.items()}

    def class_of(self) -> dict:
        return {v: key for key, members in self.classes.items() for v in members}

    def __len__(self):
        return len(self.classes)


@dataclass(frozen=True)
class RKernelParams:
    r: int
    alpha: float
    t: int

    @classmethod
    def from_alpha(cls, r: int, alpha: float) -> "RKernelParams":
        if alpha <= 1:
            raise InputError("alpha must exceed 1")
        if r < 1:
            raise InputError("radius must be at least 1")
        return cls(r, alpha, math.ceil((4 * r + 2) / (alpha - 1)))


def profile_classes(g: Graph, X: Iterable[int], r: int) -> ProfileClasses:
    """Group V(G) - X by r-projection profile onto X (the empty profile included)."""
    X = check_vertices(g, X)
    classes: dict = {}
    for u in range(g.n):
        if u not in X:
            classes.setdefault(profile(g, u, X, r).key(), []).append(u)
    return ProfileClasses(X, r, {key: tuple(m) for key, m in classes.items()})


def connected_core(g: Graph, k: int, r: int, provider: RCoreProvider | None = None):
    """Connected (k, r)-domination core, or None when G cannot be r-dominated by k vertices.

    A vertex farther than 2r from the base core also proves rejection. Otherwise
    the base core 2r-dominates G and is joined up by the radius-2r connector.
    """
    if not is_connected(g):
        raise InputError("input graph must be connected")
    provider = provider or certified_core
    Y = provider(g, k, r)
    if Y is None:
        return None
    Y = check_vertices(g, Y)
    if not Y:
        return None
    reach = bfs_distances(g, Y, cap=2 * r)
    if len(reach) < g.n:
        return None
    Q = connect_dominator(g, range(g.n), Y, r=2 * r)
    return Y | Q


def _avoiding_paths(g: Graph, u: int, X: frozenset, r: int) -> list[tuple[int, int]]:
    """Edges of an X-avoiding BFS tree from u, pruned to shortest paths ending in X."""
    parent = {u: None}
    frontier = [u]
    for _ in range(r):
        nxt = []
        for v in frontier:
            if v in X and v != u:
                continue
            for w in g.adj[v]:
                if w not in parent:
                    parent[w] = v
                    nxt.append(w)
        frontier = nxt
    edges = set()
    for x in parent:
        if x in X and x != u:
            v = x
            while parent[v] is not None:
                edges.add((min(v, parent[v]), max(v, parent[v])))
                v = parent[v]
    return sorted(edges)


def _core_paths(g: Graph, X: frozenset, r: int) -> list[tuple[int, int]]:
    """Edges of shortest paths between core vertices at distance at most r."""
    edges = set()
    for x in sorted(X):
        parent = {x: None}
        frontier = [x]
        for _ in range(r):
            nxt = []
            for v in frontier:
                for w in g.adj[v]:
                    if w not in parent:
                        parent[w] = v
                        nxt.append(w)
            frontier = nxt
        for y in parent:
            if y in X:
                v = y
                while parent[v] is not None:
                    edges.add((min(v, parent[v]), max(v, parent[v])))
                    v = parent[v]
    return sorted(edges)


@dataclass(frozen=True)
class ReducedGraph:
    graph: Graph  # G' with its own ids
    kept: tuple  # G' id -> original id
    terminals: frozenset  # original ids
    classes: ProfileClasses
    trees: tuple  # marked trees, original ids


def build_reduced_graph(g: Graph, X: Iterable[int], t: int, r: int, cap: int = ENUM_CAP) -> ReducedGraph:
    """Subgraph G' of G that keeps X, short group Steiner trees over profile
    classes, and the projection profiles of their terminals.

    Groups are the singletons of X and the classes of equal r-profile on X.
    For every set of at most 2t groups with a group Steiner tree of at most 2t
    vertices one minimum tree is kept (with the edges it induces). In each kept
    tree the smallest vertex of every group it meets is a terminal and gets an
    X-avoiding BFS tree of depth r. Shortest paths of length <= r between
    vertices of X are kept as well.
    """
    X = check_vertices(g, X)
    if t < 1:
        raise InputError("t must be positive")
    pc = profile_classes(g, X, r)
    groups = [(x,) for x in sorted(X)] + [pc.classes[key] for key in sorted(pc.classes)]
    gid = {v: i for i, grp in enumerate(groups) for v in grp}
    trees = marked_group_steiner_trees(g, groups, 2 * t, 2 * t, cap)
    vertices = set(X)
    edges = set(_core_paths(g, X, r))
    terminals = set()
    for tree in trees:
        vertices |= tree
        edges.update((u, v) for u in tree for v in g.adj[u] if u < v and v in tree)
        first = {}
        for v in sorted(tree):
            first.setdefault(gid[v], v)
        terminals.update(v for v in first.values() if v not in X)
    for u in sorted(terminals):
        edges.update(_avoiding_paths(g, u, X, r))
    for u, v in edges:
        vertices.update((u, v))
    sub, kept = subgraph_from_edges(g, vertices, edges)
    return ReducedGraph(sub, tuple(kept), frozenset(terminals), pc, tuple(sorted(trees, key=sorted)))


def r_lossy_kernel(g: Graph, k: int, params: RKernelParams, provider: RCoreProvider | None = None,
                   fallback: bool = True, cap: int = ENUM_CAP) -> KernelOutput:
    """alpha-approximate bi-kernel from connected distance-r domination to its
    annotated variant (dominate the core Z only).

    When a connected r-dominating set of fewer than t vertices exists it is
    computed exactly and the output is built around it (flagged as fallback).
    """
    r, t = params.r, params.t
    if k < 0:
        raise InputError("budget must be non-negative")
    if g.n == 0 or not is_connected(g):
        raise InputError("input graph must be connected and non-empty")
    meta = {"pipeline": "rds", "objective": "scds", "r": r, "alpha": params.alpha, "t": t, "fallback": False,
            # the reciprocal form (alpha - 1) / (4r + 2) is kept for comparison; t above is what runs
            "t_reciprocal_form": (params.alpha - 1) / (4 * r + 2)}
    if fallback:
        small = small_optimum(g, t, k, r=r, work_cap=cap)
        if small is not None:
            return fallback_output(g, small.vertices, k, r, meta)
    Z = connected_core(g, k, r, provider)
    if Z is None:
        return trivial_negative(meta)
    red = build_reduced_graph(g, Z, t, r, cap)
    index = {v: i for i, v in enumerate(red.kept)}
    meta["core_size"] = len(Z)
    meta["classes"] = len(red.classes)
    meta["terminals"] = len(red.terminals)
    inst = AnnotatedInstance(red.graph, frozenset(index[z] for z in Z), k, r)
    return KernelOutput(inst, False, red.kept, meta)


def r_lift(original: AnnotatedInstance, out: KernelOutput, D: Iterable[int]) -> LiftReport:
    """Lift a connected r-dominator of Z in G' back to G (same vertices)."""
    return lift_solution(original, out, D)


def one_approx_ds_bikernel(g: Graph, k: int, r: int, provider: RCoreProvider | None = None) -> KernelOutput:
    """Distance-r dominating set bi-kernel: the core plus one vertex per profile class.

    Each kept representative carries its X-avoiding BFS tree so its profile is
    unchanged; shortest core-to-core paths up to length r are kept too. The
    class that sees no core vertex within r cannot help and is dropped.
    """
    provider = provider or certified_core
    meta = {"pipeline": "rds-bikernel", "objective": "ds", "r": r}
    Z = provider(g, k, r)
    if Z is None:
        return trivial_negative(meta)
    Z = check_vertices(g, Z)
    pc = profile_classes(g, Z, r)
    reps = sorted(v for key, v in pc.representatives().items() if key)
    vertices = set(Z) | set(reps)
    edges = set(_core_paths(g, Z, r))
    for u in reps:
        edges.update(_avoiding_paths(g, u, Z, r))
    for u, v in edges:
        vertices.update((u, v))
    sub, kept = subgraph_from_edges(g, vertices, edges)
    index = {v: i for i, v in enumerate(kept)}
    meta["classes"] = len(pc)
    meta["core_size"] = len(Z)
    inst = AnnotatedInstance(sub, frozenset(index[z] for z in Z), k, r)
    return KernelOutput(inst, False, tuple(kept), meta)


@dataclass(frozen=True)
class DotGraph:
    graph: Graph
    roots: dict  # class key -> root id in the dot graph
    depth: dict  # class key -> number of added vertices on a root-to-leaf path
    anchor: dict  # class key -> x_kappa


def build_dot_graph(gp: Graph, X: Iterable[int], classes: dict, r: int) -> DotGraph:
    """Attach to G' one 2r-subdivided copy of each class tree T_kappa.

    `classes` maps a class key to its terminal members (ids of gp). T_kappa is
    the X-avoiding BFS tree from x_kappa (the nearest projection vertex, ties
    by id) pruned to shortest paths reaching the members; every tree edge
    becomes a path of length 2r, the root copy is a fresh vertex and the leaves
    are the members themselves. Classes with empty profile have no anchor and
    are skipped.
    """
    X = check_vertices(gp, X)
    n = gp.n
    edges = list(gp.edges())
    roots, depth, anchor = {}, {}, {}
    for key in sorted(classes):
        members = sorted(classes[key])
        if not members:
            continue
        prof = profile(gp, members[0], X, r)
        finite = [(d, x) for x, d in prof.rho.items() if d != INF]
        if not finite:
            continue
        d0, x = min(finite)
        anchor[key] = x
        parent = {x: None}
        frontier = [x]
        for _ in range(d0):
            nxt = []
            for v in frontier:
                if v in X and v != x:
                    continue
                for w in gp.adj[v]:
                    if w not in parent:
                        parent[w] = v
                        nxt.append(w)
            frontier = nxt
        tree_edges = set()
        for u in members:
            if parent.get(u, "missing") == "missing":
                raise InputError(f"member {u} does not reach its anchor within {d0} steps")
            v = u
            while parent[v] is not None:
                tree_edges.add((parent[v], v))
                v = parent[v]
        copy = {}
        for u in members:
            copy[u] = u
        copy[x] = n
        roots[key] = n
        n += 1
        for a, b in sorted(tree_edges, key=lambda e: (e[0] != x, e)):
            for w in (a, b):
                if w not in copy:
                    copy[w] = n
                    n += 1
        for a, b in sorted(tree_edges):
            chain = [copy[a]] + list(range(n, n + 2 * r - 1)) + [copy[b]]
            n += 2 * r - 1
            edges.extend(zip(chain, chain[1:]))
        depth[key] = 2 * r * d0
    return DotGraph(Graph(n, edges), roots, depth, anchor)
