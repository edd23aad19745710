"""Set Cover to distance-r Dominating Set on exact r-subdivisions, and recognition
of exact p-subdivisions."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import InputError
from .graph import Graph, components, exact_subdivision
from .oracles import N_CAP, SetCoverInstance, exact_min_dominator

K_OFFSET = 1


@dataclass(frozen=True)
class Reduction:
    graph: Graph
    k_prime: int
    roles: dict

    def to_json(self) -> dict:
        return dict(self.roles)


def _gadget_base(universe: int, families) -> Graph:
    u, f = universe, len(families)
    guard, pendant = u + f, u + f + 1
    edges = [(e, u + j) for j, fam in enumerate(families) for e in sorted(fam)]
    edges += [(u + j, guard) for j in range(f)]
    edges.append((guard, pendant))
    return Graph(u + f + 2, edges)


def reduce_to_rds(sc: SetCoverInstance, r: int) -> Reduction:
    """Exact r-subdivision of the incidence graph plus a guard on all set
    vertices and a pendant on the guard; the budget grows by one.

    Element i keeps id i, family j gets id |U|+j, then guard and pendant;
    subdivision vertices follow. An instance with an element in no family is
    replaced by the gadget of the negative instance U={0}, F={{0}}, k=0.
    """
    if r < 1:
        raise InputError("radius must be at least 1")
    universe, families, k = sc.universe, sc.families, sc.k
    covered = frozenset().union(*families) if families else frozenset()
    substituted = len(covered) < universe
    if substituted:
        universe, families, k = 1, (frozenset({0}),), 0
    base = _gadget_base(universe, families)
    g = exact_subdivision(base, r)
    u, f = universe, len(families)
    roles = {
        "element_vertices": list(range(u)),
        "set_vertices": list(range(u, u + f)),
        "guard": u + f,
        "pendant": u + f + 1,
        "k_prime": k + K_OFFSET,
        "r": r,
        "uncovered_substitute": substituted,
    }
    return Reduction(g, k + K_OFFSET, roles)


def rds_decision(red: Reduction, n_cap: int = N_CAP) -> bool:
    """Brute force: does the reduced graph have a distance-r dominating set of size <= k'?"""
    res = exact_min_dominator(red.graph, None, r=red.roles["r"], k=red.k_prime, n_cap=n_cap)
    return res.feasible


def connected_variant_bound(red: Reduction, n_cap: int = N_CAP) -> dict:
    """Informational: minimum r-DS and connected r-DS of the reduced graph next to (2r+1)k'."""
    r = red.roles["r"]
    ds = exact_min_dominator(red.graph, None, r=r, n_cap=n_cap).size
    cds = exact_min_dominator(red.graph, None, r=r, connected=True, n_cap=n_cap).size
    return {"ds": ds, "cds": cds, "bound": (2 * r + 1) * red.k_prime,
            "within_bound": cds <= (2 * r + 1) * max(ds, 1)}


def membership_check_Hp(g: Graph, p: int) -> bool:
    """Is g the exact p-subdivision of some simple graph?

    Vertices of degree other than 2 must be branch vertices. Every maximal run
    of degree-2 vertices between branch vertices then has a forced split into
    segments of length p; the base graph must come out without loops or
    parallel edges. Components that are plain cycles need length divisible by
    p and at least 3p.
    """
    if p < 1:
        raise InputError("p must be at least 1")
    if p == 1:
        return True
    branch = [v for v in range(g.n) if g.degree(v) != 2]
    is_branch = set(branch)
    seen_edges = set()
    direct = Counter()
    for b in branch:
        for w in g.adj[b]:
            if (b, w) in seen_edges:
                continue
            # walk the chain b - w - ... until the next branch vertex
            length, prev, cur = 1, b, w
            seen_edges.add((b, w))
            while cur not in is_branch:
                a, c = g.adj[cur]
                nxt = c if a == prev else a
                prev, cur = cur, nxt
                length += 1
            seen_edges.add((cur, prev))
            if length % p:
                return False
            segments = length // p
            if cur == b and segments < 3:
                return False
            if segments == 1:
                direct[(min(b, cur), max(b, cur))] += 1
    if any(c > 1 for c in direct.values()):
        return False
    for comp in components(g):
        if not is_branch.intersection(comp):
            if len(comp) % p or len(comp) < 3 * p:
                return False
    return True
