"""Domination cores of K_{d,d}-free graphs and the (1+eps) CDS kernel built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import InputError
from .framework import KernelOutput, lossy_cds_kernel
from .graph import Graph, check_vertices, contains_biclique

CORE_REDUCED = "core-reduced"
DS_EXCEEDS_K = "ds-exceeds-k"


@dataclass(frozen=True)
class CoreReductionTrace:
    chain: tuple  # ((X_i, v_i), ...) with X_i = X_{i-1} ∩ N[v_i]
    z: int | None
    verdict: str


def core_bound(k: int, d: int) -> int:
    return (2 * d + 1) * k ** (d + 1)


def kdd_class_bound(core_size: int, d: int) -> int:
    return 2 * d * core_size ** d


def reduce_core_once(g: Graph, Z: Iterable[int], k: int, d: int, literal: bool = False) -> CoreReductionTrace:
    """Find z with Z - {z} still a k-domination core, or conclude ds(G) > k.

    Counting uses closed neighbourhoods. A vertex v extends the chain when
    |N[v] ∩ X| >= ceil((|X| - 1) / k); when nobody qualifies, no k vertices
    outside the chain can dominate X minus one vertex, so the chain meets every
    small dominator of Z - {z}. `literal=True` uses the threshold ceil(|X| / k)
    instead, which is not sound (kept for comparison tests).
    """
    if k < 1 or d < 1:
        raise InputError("k and d must be positive")
    Z = check_vertices(g, Z)
    if len(Z) <= core_bound(k, d):
        raise InputError(f"|Z| = {len(Z)} does not exceed (2d+1)k^(d+1) = {core_bound(k, d)}")
    closed = [g.closed_neighbors(v) for v in range(g.n)]
    need = math.ceil(len(Z) / k)
    if not any(len(closed[v] & Z) >= need for v in range(g.n)):
        return CoreReductionTrace((), None, DS_EXCEEDS_K)
    X = frozenset(Z)
    S: list[int] = []
    chain = []
    while True:
        need = math.ceil(len(X) / k) if literal else math.ceil((len(X) - 1) / k)
        best, best_count = None, -1
        for v in range(g.n):
            if v in S:
                continue
            c = len(closed[v] & X)
            if c >= need and c > best_count:
                best, best_count = v, c
        if best is None:
            break
        S.append(best)
        X = X & closed[best]
        chain.append((X, best))
        assert len(chain) < d or literal, "chain reached length d: input contains K_{d,d}"
    rest = sorted(X - set(S))
    assert rest, "no removable vertex left in the last chain set"
    return CoreReductionTrace(tuple(chain), rest[0], CORE_REDUCED)


def compute_core(g: Graph, k: int, d: int, check_free: bool = False, traces: list | None = None):
    """Shrink Z = V(G) one vertex at a time down to (2d+1)k^(d+1) vertices.

    Returns the core as a frozenset, or None when ds(G) > k was detected.
    """
    if check_free and contains_biclique(g, d):
        raise InputError(f"graph contains K_{{{d},{d}}}")
    Z = set(range(g.n))
    while len(Z) > core_bound(k, d):
        tr = reduce_core_once(g, Z, k, d)
        if traces is not None:
            traces.append(tr)
        if tr.verdict == DS_EXCEEDS_K:
            return None
        Z.discard(tr.z)
    return frozenset(Z)


def psaks_kdd(g: Graph, k: int, eps: float, d: int, **kw) -> KernelOutput:
    """(1+eps)-approximate CDS kernel on K_{d,d}-free graphs."""
    out = lossy_cds_kernel(g, k, eps, lambda h, kk: compute_core(h, kk, d), **kw)
    out.params["pipeline"] = "kdd-psaks"
    out.params["d"] = d
    out.params["core_bound"] = core_bound(k, d)
    return out
