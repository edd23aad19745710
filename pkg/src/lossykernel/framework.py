"""Covering families, connector repair, core classes and the generic lossy CDS kernel."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .errors import InputError, ResourceError
from .graph import (
    INF,
    Graph,
    bfs_distances,
    check_vertices,
    components,
    dominated,
    induced_subgraph,
    is_connected,
)
from .oracles import exact_min_dominator

ENUM_CAP = 2_000_000
GROUP_CAP = 4096


@dataclass(frozen=True)
class AnnotatedInstance:
    graph: Graph
    Z: frozenset
    k: int
    r: int = 1

    def __post_init__(self):
        object.__setattr__(self, "Z", check_vertices(self.graph, self.Z))
        if self.k < 0:
            raise InputError("budget must be non-negative")
        if self.r < 1:
            raise InputError("radius must be at least 1")


@dataclass(frozen=True)
class CoveringFamily:
    parts: tuple
    t: int


@dataclass(frozen=True)
class CorePartition:
    Z: frozenset
    classes: dict  # signature (sorted tuple of core ids) -> sorted member tuple

    def groups(self) -> list[tuple]:
        """Singletons of Z in id order, then one group per class in signature order."""
        return [(z,) for z in sorted(self.Z)] + [self.classes[s] for s in sorted(self.classes)]

    def __len__(self):
        return len(self.classes)


@dataclass(frozen=True)
class KernelOutput:
    reduced: AnnotatedInstance
    trivial_negative: bool
    kept_map: tuple  # reduced id -> original id
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        g = self.reduced.graph
        return {
            "reduced_graph": {"n": g.n, "edges": [list(e) for e in g.edges()]},
            "Z": sorted(self.reduced.Z),
            "k": self.reduced.k,
            "r": self.reduced.r,
            "kept_map": list(self.kept_map),
            "params": self.params,
            "trivial_negative": self.trivial_negative,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@dataclass(frozen=True)
class LiftReport:
    solution: frozenset
    value: float
    valid: bool


def objective_value(g: Graph, k: int, D: Iterable[int], Z=None, r: int = 1, connected: bool = True) -> float:
    """min(|D|, k+1) if D is a (connected) r-dominator of Z (default V(G)), else infinity."""
    D = frozenset(D)
    target = frozenset(range(g.n)) if Z is None else frozenset(Z)
    if not target <= dominated(g, D, r):
        return INF
    if connected and not is_connected(g, D):
        return INF
    return min(len(D), k + 1)


# covering families

def spanning_tree(g: Graph, D: Iterable[int]) -> tuple[int, dict]:
    """BFS spanning tree of G[D] rooted at its smallest vertex; returns (root, parent map)."""
    D = sorted(D)
    inside = set(D)
    root = D[0]
    parent = {root: None}
    order = [root]
    for v in order:
        for w in g.adj[v]:
            if w in inside and w not in parent:
                parent[w] = v
                order.append(w)
    if len(parent) != len(D):
        raise InputError("dominator must induce a connected subgraph")
    return root, parent


def covering_family(g: Graph, D: Iterable[int], t: int) -> CoveringFamily:
    """Cut a spanning tree of G[D] into connected parts of at most 2t vertices each.

    Repeatedly: cut off a subtree whose weight lies in [t, 2t] (smallest such);
    otherwise at the lightest vertex heavier than 2t cut off itself together with
    a greedy batch of child subtrees of total weight in (t, 2t); otherwise take
    what is left.
    """
    if t < 1:
        raise InputError("t must be positive")
    D = check_vertices(g, D)
    if not D:
        return CoveringFamily((), t)
    root, parent = spanning_tree(g, D)
    children = {v: set() for v in parent}
    for v, p in parent.items():
        if p is not None:
            children[p].add(v)
    alive_root = root
    parts = []

    def subtree(v):
        out = [v]
        for u in out:
            out.extend(sorted(children[u]))
        return out

    while alive_root is not None:
        weight = {}
        for v in reversed(subtree(alive_root)):
            weight[v] = 1 + sum(weight[u] for u in children[v])
        mid = [v for v in weight if t <= weight[v] <= 2 * t]
        if mid:
            v = min(mid, key=lambda x: (weight[x], x))
            parts.append(frozenset(subtree(v)))
            if v == alive_root:
                alive_root = None
            else:
                children[parent[v]].discard(v)
            continue
        heavy = [v for v in weight if weight[v] > 2 * t]
        if heavy:
            v = min(heavy, key=lambda x: (weight[x], x))
            chosen, total = [], 0
            for u in sorted(children[v]):
                if total > t:
                    break
                chosen.append(u)
                total += weight[u]
            assert t < total < 2 * t, "greedy child batch out of range"
            part = {v}
            for u in chosen:
                part.update(subtree(u))
                children[v].discard(u)
            parts.append(frozenset(part))
            continue
        parts.append(frozenset(subtree(alive_root)))
        alive_root = None
    return CoveringFamily(tuple(parts), t)


# connector

def _path_to(parent: dict, v: int) -> list[int]:
    out = []
    while v is not None:
        out.append(v)
        v = parent[v]
    return out


def _bfs_tree(g: Graph, sources: Iterable[int], cap: int) -> dict:
    parent = {s: None for s in sorted(sources)}
    frontier = sorted(parent)
    for _ in range(cap):
        nxt = []
        for v in frontier:
            for w in g.adj[v]:
                if w not in parent:
                    parent[w] = v
                    nxt.append(w)
        frontier = sorted(nxt)
    return parent


def connect_dominator(g: Graph, X: Iterable[int], D: Iterable[int], r: int = 1, trace: list | None = None) -> frozenset:
    """Extra vertices Q, |Q| <= 2r * #components(G[D]), making G[D ∪ Q] connected.

    Each round either finds a vertex of X within distance r of two components
    (and adds it plus the connecting path interiors) or an edge xy of G[X]
    whose ends are reached by different components (and adds x, y and the
    path interiors). Every round merges at least two components.
    """
    X = check_vertices(g, X)
    D = check_vertices(g, D)
    if r < 1:
        raise InputError("radius must be at least 1")
    if not is_connected(g, X):
        raise InputError("X must induce a connected subgraph")
    if not X <= dominated(g, D, r):
        raise InputError("D does not dominate X within the given radius")
    current = set(D)
    comps = components(g, current)
    for c in comps:
        if not set(bfs_distances(g, c, cap=r)) & X:
            raise InputError("a component of D is farther than r from X")
    Q = set()
    while len(comps) > 1:
        # owner components of each X vertex and the BFS trees reaching it
        trees = [_bfs_tree(g, c, r) for c in comps]
        owners = {x: [i for i, tr in enumerate(trees) if x in tr] for x in sorted(X)}
        added = None
        for x in sorted(X):
            if len(owners[x]) >= 2:
                i, j = owners[x][:2]
                added = set(_path_to(trees[i], x)) | set(_path_to(trees[j], x))
                break
        if added is None:
            for x in sorted(X):
                for y in g.adj[x]:
                    if y not in X:
                        continue
                    pair = [(i, j) for i in owners[x] for j in owners[y] if i != j]
                    if pair:
                        i, j = pair[0]
                        added = set(_path_to(trees[i], x)) | set(_path_to(trees[j], y))
                        break
                if added is not None:
                    break
        if added is None:
            raise AssertionError("no merging step applies although G[D ∪ Q] is disconnected")
        new = added - current
        assert len(new) <= 2 * r
        Q |= new
        current |= new
        before = len(comps)
        comps = components(g, current)
        assert len(comps) < before, "connector round made no progress"
        if trace is not None:
            trace.append((sorted(new), len(comps)))
    return frozenset(Q)


# classes of the core relation

def core_partition(g: Graph, Z: Iterable[int]) -> CorePartition:
    """Group V minus Z by the trace N(u) ∩ Z."""
    Z = check_vertices(g, Z)
    classes: dict = {}
    for v in range(g.n):
        if v in Z:
            continue
        sig = tuple(sorted(g.neighbors(v) & Z))
        classes.setdefault(sig, []).append(v)
    return CorePartition(Z, {s: tuple(m) for s, m in classes.items()})


def connected_sets(g: Graph, max_size: int, cap: int = ENUM_CAP) -> list[tuple]:
    """Every vertex set of size <= max_size inducing a connected subgraph, each once.

    Sets are grown from their smallest vertex by only adding larger neighbours
    of the current frontier (the usual exclusive-neighbourhood enumeration).
    """
    out = []

    def extend(sub, ext, root, excl):
        out.append(tuple(sorted(sub)))
        if len(out) > cap:
            raise ResourceError(f"more than {cap} connected sets of size <= {max_size}")
        if len(sub) == max_size:
            return
        ext = sorted(ext)
        while ext:
            w = ext.pop(0)
            new_ext = set(ext)
            for u in g.adj[w]:
                if u > root and u not in sub and u not in excl:
                    new_ext.add(u)
            extend(sub | {w}, new_ext, root, excl | set(g.adj[w]) | {w})

    for v in range(g.n):
        if max_size < 1:
            break
        ext = {u for u in g.adj[v] if u > v}
        extend({v}, ext, v, set(g.adj[v]) | {v})
    return out


def marked_group_steiner_trees(g: Graph, groups: list, max_groups: int, max_size: int, cap: int = ENUM_CAP, want_map: bool = False):
    """For every set Q of at most `max_groups` groups whose group Steiner tree has
    at most `max_size` vertices, pick one minimum tree; return the distinct trees.

    Candidate trees are the connected vertex sets of size <= max_size visited by
    (size, sorted ids), so each Q receives the lexicographically first optimum.
    Groups are assumed disjoint, so a vertex belongs to at most one group.
    """
    gid = {}
    for i, grp in enumerate(groups):
        for v in grp:
            gid[v] = i
    sets = connected_sets(g, max_size, cap)
    sets.sort(key=lambda s: (len(s), s))
    assigned = {} if want_map else set()
    trees = []
    for s in sets:
        hits = sorted({gid[v] for v in s if v in gid})
        if not hits:
            continue
        fresh = False
        for size in range(1, min(len(hits), max_groups) + 1):
            for q in itertools.combinations(hits, size):
                if q not in assigned:
                    if want_map:
                        assigned[q] = s
                    else:
                        assigned.add(q)
                    fresh = True
        if fresh:
            trees.append(frozenset(s))
    if want_map:
        return trees, assigned
    return trees


# kernel

CoreProvider = Callable[[Graph, int], Optional[Iterable[int]]]


def trivial_negative(params: dict) -> KernelOutput:
    inst = AnnotatedInstance(Graph(1), frozenset({0}), 0, 1)
    return KernelOutput(inst, True, (), dict(params))


def _search_cost(n: int, size: int) -> int:
    return sum(math.comb(n, i) for i in range(size + 1))


def small_optimum(g: Graph, below: float, k: int, r: int = 1, Z=None, work_cap: int = ENUM_CAP):
    """Exact connected r-dominator of Z if one exists of size < below and <= k, else None."""
    limit = min(k, math.ceil(below) - 1)
    if limit < 1:
        return None
    if _search_cost(g.n, limit) > work_cap:
        raise ResourceError(f"exact search up to size {limit} on {g.n} vertices exceeds work cap")
    res = exact_min_dominator(g, Z, r=r, connected=True, k=limit, n_cap=max(g.n, 1))
    return res if res.feasible else None


def fallback_output(g: Graph, solution: Iterable[int], k: int, r: int, params: dict) -> KernelOutput:
    """Reduced instance built around an exactly computed optimum; lifting returns that optimum."""
    sol = sorted(solution)
    sub, keep = induced_subgraph(g, sol)
    p = dict(params)
    p["fallback"] = True
    p["fallback_solution"] = sol
    inst = AnnotatedInstance(sub, frozenset(range(sub.n)), k, r)
    return KernelOutput(inst, False, tuple(keep), p)


def cds_t(eps: float) -> int:
    return math.ceil(3 / eps)


def lossy_cds_kernel(
    g: Graph,
    k: int,
    eps: float,
    core_provider: CoreProvider,
    t: int | None = None,
    fallback: bool = True,
    cap: int = ENUM_CAP,
) -> KernelOutput:
    """(1+eps)-approximate kernel for connected dominating set, given a core provider.

    Parameters land in the output metadata. When a connected dominating set of
    size below 3/eps exists it is found exactly and the output is built around
    it (flagged as a fallback); otherwise groups are the core singletons plus
    the trace classes, small group Steiner trees are marked, and the marked set
    is made connected.
    """
    if eps <= 0:
        raise InputError("eps must be positive")
    if k < 0:
        raise InputError("budget must be non-negative")
    if g.n == 0 or not is_connected(g):
        raise InputError("input graph must be connected and non-empty")
    t = cds_t(eps) if t is None else t
    params = {"pipeline": "cds", "objective": "cds", "eps": eps, "t": t, "fallback": False}
    if fallback:
        small = small_optimum(g, 3 / eps, k, work_cap=cap)
        if small is not None:
            return fallback_output(g, small.vertices, k, 1, params)
    Z = core_provider(g, k)
    if Z is None:
        return trivial_negative(params)
    Z = check_vertices(g, Z)
    part = core_partition(g, Z)
    groups = part.groups()
    params["core_size"] = len(Z)
    params["classes"] = len(part)
    if len(groups) > GROUP_CAP:
        raise ResourceError(f"{len(groups)} groups exceeds cap {GROUP_CAP}")
    trees = marked_group_steiner_trees(g, groups, 2 * t, 2 * t, cap)
    marked = frozenset().union(*trees) if trees else frozenset()
    params["marked"] = len(marked)
    if dominated(g, marked) != frozenset(range(g.n)):
        return trivial_negative(params)
    W = connect_dominator(g, range(g.n), marked)
    Y = marked | W
    assert Z <= Y
    sub, keep = induced_subgraph(g, Y)
    index = {v: i for i, v in enumerate(keep)}
    inst = AnnotatedInstance(sub, frozenset(index[z] for z in Z), k, 1)
    return KernelOutput(inst, False, tuple(keep), params)


def _reduced_valid(out: KernelOutput, D: frozenset) -> bool:
    inst = out.reduced
    g = inst.graph
    objective = out.params.get("objective", "cds")
    if objective == "cds":
        return dominated(g, D) == frozenset(range(g.n)) and is_connected(g, D)
    if objective == "scds":
        return inst.Z <= dominated(g, D, inst.r) and is_connected(g, D)
    if objective == "ds":
        return inst.Z <= dominated(g, D, inst.r)
    raise InputError(f"unknown objective {objective!r}")


def lift_solution(original: AnnotatedInstance, out: KernelOutput, D: Iterable[int]) -> LiftReport:
    """Map a reduced solution back to the original graph.

    Invalid reduced solutions lift to the empty set with infinite value; valid
    ones of size at most k are translated to original ids; larger valid ones
    (and any solution of a trivial negative output) are replaced by V(G),
    whose value is min(n, k+1).
    """
    D = frozenset(D)
    g = out.reduced.graph
    if any(not (0 <= v < g.n) for v in D) or not _reduced_valid(out, D):
        return LiftReport(frozenset(), INF, False)
    k = original.k
    if out.params.get("fallback"):
        sol = frozenset(out.params["fallback_solution"])
        return LiftReport(sol, min(len(sol), k + 1), True)
    if out.trivial_negative or len(D) > k:
        n = original.graph.n
        return LiftReport(frozenset(range(n)), min(n, k + 1), True)
    mapped = frozenset(out.kept_map[v] for v in D)
    return LiftReport(mapped, len(mapped), True)


def ds_bikernel(g: Graph, Z: Iterable[int], k: int) -> KernelOutput:
    """Keep the core plus the smallest member of every trace class that sees Z.

    The class of vertices with no neighbour in Z can never help to dominate Z
    and is dropped.
    """
    Z = check_vertices(g, Z)
    part = core_partition(g, Z)
    keep = set(Z)
    for sig, members in part.classes.items():
        if sig:
            keep.add(members[0])
    sub, kept = induced_subgraph(g, keep)
    index = {v: i for i, v in enumerate(kept)}
    inst = AnnotatedInstance(sub, frozenset(index[z] for z in Z), k, 1)
    params = {"pipeline": "ds-bikernel", "objective": "ds", "classes": len(part)}
    return KernelOutput(inst, False, tuple(kept), params)
