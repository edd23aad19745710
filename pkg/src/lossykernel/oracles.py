"""Exact reference solvers: Steiner trees, minimum (connected) dominators, set cover.

Everything here is exponential and guarded by work caps that raise
ResourceError instead of silently degrading.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError, ResourceError
from .graph import INF, Graph, bfs_distances, check_vertices

N_CAP = 30
WORK_CAP = 2_000_000  # subsets tried when a budget lets a larger graph through
GROUP_CAP = 14


@dataclass(frozen=True)
class SteinerResult:
    size: float
    vertices: frozenset

    @property
    def feasible(self) -> bool:
        return self.size != INF


@dataclass(frozen=True)
class DominatorResult:
    size: float
    vertices: frozenset

    @property
    def feasible(self) -> bool:
        return self.size != INF


def _mask(vs: Iterable[int]) -> int:
    x = 0
    for v in vs:
        x |= 1 << v
    return x


def _members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _mask_connected(g: Graph, mask: int) -> bool:
    if mask == 0:
        return True
    low = mask & -mask
    seen = low
    frontier = low
    while frontier:
        v = (frontier & -frontier).bit_length() - 1
        frontier &= frontier - 1
        new = g.nbr_mask(v) & mask & ~seen
        seen |= new
        frontier |= new
    return seen == mask


def ball_masks(g: Graph, r: int) -> list[int]:
    return [_mask(bfs_distances(g, [v], cap=r)) for v in range(g.n)]


def exact_group_steiner_tree(g: Graph, groups: Sequence[Iterable[int]], group_cap: int = GROUP_CAP) -> SteinerResult:
    """Minimum-order connected vertex set meeting every group.

    Dynamic program over (groups hit, root vertex): a state is grown either by
    merging two states at the same root or by stepping across an edge.
    """
    groups = [check_vertices(g, grp) for grp in groups]
    if not groups:
        raise InputError("need at least one group")
    if any(not grp for grp in groups):
        raise InputError("groups must be non-empty")
    if len(groups) > group_cap:
        raise ResourceError(f"{len(groups)} groups exceeds cap {group_cap}")
    t = len(groups)
    full = (1 << t) - 1
    n = g.n
    hit = [0] * n
    for i, grp in enumerate(groups):
        for v in grp:
            hit[v] |= 1 << i
    cost = [[INF] * n for _ in range(full + 1)]
    back: list[list] = [[None] * n for _ in range(full + 1)]
    for v in range(n):
        if hit[v]:
            # a single vertex covers every group it belongs to, and any subset of those
            sub = hit[v]
            while sub:
                if cost[sub][v] > 1:
                    cost[sub][v] = 1
                    back[sub][v] = ("leaf",)
                sub = (sub - 1) & hit[v]
    for mask in range(1, full + 1):
        row = cost[mask]
        brow = back[mask]
        # merges at a common root; each unordered split visited once
        if mask & (mask - 1):
            low = mask & -mask
            rest = mask ^ low
            sub = rest
            while True:
                a = sub | low
                b = mask ^ a
                if b:
                    ca, cb = cost[a], cost[b]
                    for v in range(n):
                        c = ca[v] + cb[v] - 1
                        if c < row[v]:
                            row[v] = c
                            brow[v] = ("merge", a)
                if sub == 0:
                    break
                sub = (sub - 1) & rest
        # unit-weight relaxation from current values (Dijkstra over vertices)
        heap = [(row[v], v) for v in range(n) if row[v] != INF]
        heapq.heapify(heap)
        while heap:
            c, v = heapq.heappop(heap)
            if c > row[v]:
                continue
            for w in g.adj[v]:
                if c + 1 < row[w]:
                    row[w] = c + 1
                    brow[w] = ("edge", v)
                    heapq.heappush(heap, (c + 1, w))
    best = min(range(n), key=lambda v: (cost[full][v], v), default=None)
    if best is None or cost[full][best] == INF:
        return SteinerResult(INF, frozenset())

    verts = set()
    stack = [(full, best)]
    while stack:
        mask, v = stack.pop()
        verts.add(v)
        step = back[mask][v]
        if step[0] == "merge":
            stack.append((step[1], v))
            stack.append((mask ^ step[1], v))
        elif step[0] == "edge":
            stack.append((mask, step[1]))
    return SteinerResult(len(verts), frozenset(verts))


def exact_steiner_tree(g: Graph, terminals: Iterable[int], group_cap: int = GROUP_CAP) -> SteinerResult:
    """Minimum number of vertices of a subtree spanning all terminals."""
    terminals = sorted(check_vertices(g, terminals))
    if not terminals:
        raise InputError("need at least one terminal")
    return exact_group_steiner_tree(g, [[v] for v in terminals], group_cap)


def _check_n(g: Graph, n_cap: int, limit: int | None = None) -> None:
    """Graphs above n_cap are only searched when the budget keeps the subset count small."""
    if g.n <= n_cap:
        return
    if limit is not None and sum(math.comb(g.n, i) for i in range(limit + 1)) <= WORK_CAP:
        return
    raise ResourceError(f"exhaustive search on {g.n} vertices exceeds cap {n_cap}")


def exact_min_dominator(
    g: Graph,
    Z: Iterable[int] | None = None,
    r: int = 1,
    connected: bool = False,
    k: int | None = None,
    n_cap: int = N_CAP,
    prune: bool = False,
) -> DominatorResult:
    """Smallest set r-dominating Z (default Z = V), optionally required connected.

    Sizes are tried in increasing order and subsets in lexicographic order, so
    the returned set is the lexicographically smallest optimum. With a budget k
    only sizes up to k are tried; an infinite size means nothing fits.
    `prune=True` (unconnected only) drops candidates whose reach inside Z is
    contained in another candidate's; the size stays exact but the returned
    set need not be the lexicographically first one.
    """
    _check_n(g, n_cap, k)
    Z = set(range(g.n)) if Z is None else check_vertices(g, Z)
    if r < 1:
        raise InputError("radius must be at least 1")
    target = _mask(Z)
    if target == 0:
        return DominatorResult(0, frozenset())
    balls = ball_masks(g, r)
    limit = g.n if k is None else min(k, g.n)
    # only vertices that reach some target can matter for an inclusion-minimal
    # unconnected dominator; connected ones may need pure connector vertices
    cand = list(range(g.n)) if connected else [v for v in range(g.n) if balls[v] & target]
    if prune and not connected:
        reach = {v: balls[v] & target for v in cand}
        cand = [v for v in cand
                if not any(w != v and reach[v] | reach[w] == reach[w] and (reach[v] != reach[w] or w < v)
                           for w in cand)]
    for size in range(1, limit + 1):
        for combo in itertools.combinations(cand, size):
            cov = 0
            for v in combo:
                cov |= balls[v]
            if cov & target != target:
                continue
            if connected and not _mask_connected(g, _mask(combo)):
                continue
            return DominatorResult(size, frozenset(combo))
    return DominatorResult(INF, frozenset())


def domination_core_witness(g: Graph, Z: Iterable[int], k: int, r: int = 1, n_cap: int = N_CAP):
    """A set of size <= k that r-dominates Z but not V(G), or None if Z is a core."""
    _check_n(g, n_cap, k)
    target = _mask(check_vertices(g, Z))
    full = (1 << g.n) - 1
    balls = ball_masks(g, r)
    for size in range(0, min(k, g.n) + 1):
        for combo in itertools.combinations(range(g.n), size):
            cov = 0
            for v in combo:
                cov |= balls[v]
            if cov & target == target and cov != full:
                return frozenset(combo)
    return None


def is_domination_core(g: Graph, Z: Iterable[int], k: int, r: int = 1, n_cap: int = N_CAP) -> bool:
    """True iff every set of size <= k that r-dominates Z also r-dominates V(G)."""
    return domination_core_witness(g, Z, k, r, n_cap) is None


# set cover

@dataclass(frozen=True)
class SetCoverInstance:
    universe: int
    families: tuple
    k: int

    def __post_init__(self):
        fams = tuple(frozenset(f) for f in self.families)
        for f in fams:
            if not f:
                raise InputError("families must be non-empty")
            if any(not (0 <= e < self.universe) for e in f):
                raise InputError(f"family {sorted(f)} leaves the universe 0..{self.universe - 1}")
        if self.k < 0:
            raise InputError("budget must be non-negative")
        object.__setattr__(self, "families", fams)


def exact_set_cover(universe: int, families: Sequence[Iterable[int]], k: int) -> bool:
    """True iff at most k of the families cover 0..universe-1."""
    target = (1 << universe) - 1
    masks = [_mask(f) for f in families]
    for size in range(0, min(k, len(masks)) + 1):
        for combo in itertools.combinations(masks, size):
            cov = 0
            for m in combo:
                cov |= m
            if cov == target:
                return True
    return False


def min_set_cover_dp(universe: int, families: Sequence[Iterable[int]]) -> float:
    """Minimum number of families covering the universe, by DP over element subsets."""
    full = (1 << universe) - 1
    masks = [_mask(f) for f in families]
    best = [INF] * (full + 1)
    best[0] = 0
    for covered in range(full + 1):
        if best[covered] == INF:
            continue
        for m in masks:
            nxt = covered | m
            if best[covered] + 1 < best[nxt]:
                best[nxt] = best[covered] + 1
    return best[full]


def parse_set_cover(text: str) -> SetCoverInstance:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 3:
        raise InputError("set cover file must start with a '|U| |F| k' header")
    try:
        u, f, k = (int(x) for x in rows[0])
        fams = [[int(x) for x in row] for row in rows[1:]]
    except ValueError as exc:
        raise InputError(f"malformed set cover file: {exc}") from None
    if len(fams) != f:
        raise InputError(f"header declares {f} families, found {len(fams)}")
    return SetCoverInstance(u, fams, k)


def format_set_cover(sc: SetCoverInstance) -> str:
    lines = [f"{sc.universe} {len(sc.families)} {sc.k}"]
    lines += [" ".join(str(e) for e in sorted(f)) for f in sc.families]
    return "\n".join(lines) + "\n"


def certified_core(g: Graph, k: int, r: int = 1, n_cap: int = N_CAP):
    """Brute-force (k, r)-domination core: None if no k vertices r-dominate G,
    else V(G) shrunk greedily (in id order) while the core property still holds."""
    if exact_min_dominator(g, None, r=r, k=k, n_cap=n_cap).size == INF:
        return None
    Z = set(range(g.n))
    for v in range(g.n):
        if is_domination_core(g, Z - {v}, k, r, n_cap):
            Z.discard(v)
    return frozenset(Z)
