"""Simple undirected graphs over dense integer ids, traversal and generators."""

from __future__ import annotations

import itertools
import random
from collections import deque
from typing import Iterable

from .errors import InputError, ResourceError

SIZE_CAP = 100_000
INF = float("inf")


class Graph:
    """Immutable simple graph on vertices 0..n-1 with sorted adjacency lists."""

    __slots__ = ("n", "adj", "_sets", "_masks")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), size_cap: int = SIZE_CAP):
        if n < 0:
            raise InputError("negative vertex count")
        if n > size_cap:
            raise ResourceError(f"graph with {n} vertices exceeds size cap {size_cap}")
        nbrs = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InputError(f"self-loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self.adj = tuple(tuple(sorted(s)) for s in nbrs)
        self._sets = tuple(frozenset(s) for s in nbrs)
        self._masks = None

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def vertices(self) -> range:
        return range(self.n)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def neighbors(self, v: int) -> frozenset:
        return self._sets[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._sets[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def closed_neighbors(self, v: int) -> frozenset:
        return self._sets[v] | {v}

    def nbr_mask(self, v: int) -> int:
        """Open neighbourhood of v as an int bitmask."""
        if self._masks is None:
            masks = []
            for a in self.adj:
                x = 0
                for u in a:
                    x |= 1 << u
                masks.append(x)
            self._masks = tuple(masks)
        return self._masks[v]


def check_vertices(g: Graph, s: Iterable[int]) -> frozenset:
    s = frozenset(s)
    for v in s:
        if not (isinstance(v, int) and 0 <= v < g.n):
            raise InputError(f"vertex {v!r} not in graph with n={g.n}")
    return s


def bfs_distances(g: Graph, sources: Iterable[int], avoid: Iterable[int] = (), cap=None) -> dict[int, int]:
    """Distances from `sources` along paths whose internal vertices avoid `avoid`.

    Vertices of `avoid` can still be reached as endpoints; they are never expanded.
    Vertices farther than `cap` are left out of the result.
    """
    sources = check_vertices(g, sources)
    avoid = frozenset(avoid)
    if sources & avoid:
        raise InputError("sources must be disjoint from avoid")
    dist = {s: 0 for s in sorted(sources)}
    queue = deque(sorted(sources))
    while queue:
        u = queue.popleft()
        du = dist[u]
        if u in avoid or (cap is not None and du >= cap):
            continue
        for w in g.adj[u]:
            if w not in dist:
                dist[w] = du + 1
                queue.append(w)
    return dist


def distance_matrix(g: Graph) -> list[list[float]]:
    out = []
    for v in range(g.n):
        d = bfs_distances(g, [v])
        out.append([d.get(u, INF) for u in range(g.n)])
    return out


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, list[int]]:
    """Return G[s] with ids renumbered in increasing order, plus the new->old id map."""
    keep = sorted(check_vertices(g, s))
    index = {v: i for i, v in enumerate(keep)}
    edges = [(index[u], index[v]) for u in keep for v in g.adj[u] if u < v and v in index]
    return Graph(len(keep), edges), keep


def subgraph_from_edges(g: Graph, vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> tuple[Graph, list[int]]:
    """Build a (not necessarily induced) subgraph of g from explicit vertices and edges."""
    keep = sorted(check_vertices(g, vertices))
    index = {v: i for i, v in enumerate(keep)}
    out = set()
    for u, v in edges:
        if not g.has_edge(u, v):
            raise InputError(f"({u}, {v}) is not an edge of the host graph")
        a, b = index[u], index[v]
        out.add((min(a, b), max(a, b)))
    return Graph(len(keep), sorted(out)), keep


def components(g: Graph, s: Iterable[int] | None = None) -> list[list[int]]:
    """Connected components of G[s] as sorted lists, ordered by smallest member."""
    s = set(range(g.n)) if s is None else set(s)
    seen = set()
    comps = []
    for v in sorted(s):
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        stack = [v]
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if w in s and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph, s: Iterable[int] | None = None) -> bool:
    """True iff G[s] has exactly one component. The empty set counts as connected."""
    s = set(range(g.n)) if s is None else set(s)
    if not s:
        return True
    return len(components(g, s)) == 1


def dominated(g: Graph, d: Iterable[int], r: int = 1) -> frozenset:
    """All vertices within distance r of d."""
    d = list(d)
    if not d:
        return frozenset()
    return frozenset(bfs_distances(g, d, cap=r))


def degeneracy(g: Graph) -> int:
    """Largest minimum degree over all subgraphs, by repeated min-degree peeling."""
    deg = [g.degree(v) for v in range(g.n)]
    alive = set(range(g.n))
    best = 0
    while alive:
        v = min(alive, key=lambda x: (deg[x], x))
        best = max(best, deg[v])
        alive.remove(v)
        for w in g.adj[v]:
            if w in alive:
                deg[w] -= 1
    return best


def exact_subdivision(base: Graph, p: int) -> Graph:
    """Replace every edge by a path of length exactly p. Base vertices keep their ids.

    The internal vertices of the path for the i-th edge (in sorted edge order)
    get ids n + i*(p-1) .. n + (i+1)*(p-1) - 1, listed from the smaller endpoint.
    """
    if p < 1:
        raise InputError("subdivision length must be at least 1")
    if p == 1:
        return base
    edges = []
    nxt = base.n
    for u, v in base.edges():
        chain = [u] + list(range(nxt, nxt + p - 1)) + [v]
        nxt += p - 1
        edges.extend(zip(chain, chain[1:]))
    return Graph(nxt, edges)


def lexicographic_product(g: Graph, t: int) -> Graph:
    """g composed with K_t; vertex (v, a) gets id v*t + a."""
    if t < 1:
        raise InputError("t must be positive")
    edges = []
    for v in range(g.n):
        for a, b in itertools.combinations(range(t), 2):
            edges.append((v * t + a, v * t + b))
    for u, v in g.edges():
        for a in range(t):
            for b in range(t):
                edges.append((u * t + a, v * t + b))
    return Graph(g.n * t, edges)


def contains_biclique(g: Graph, d: int) -> bool:
    """True iff K_{d,d} is a (not necessarily induced) subgraph of g."""
    if d < 1:
        raise InputError("d must be positive")
    full = (1 << g.n) - 1

    def grow(start: int, chosen: int, common: int) -> bool:
        if chosen == d:
            return bin(common).count("1") >= d
        for v in range(start, g.n):
            c = common & g.nbr_mask(v)
            if bin(c).count("1") >= d and grow(v + 1, chosen + 1, c):
                return True
        return False

    return grow(0, 0, full)


# generators

def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise InputError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star(leaves: int) -> Graph:
    """Centre 0 joined to leaves 1..leaves."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def grid(k: int, m: int) -> Graph:
    """k x m grid; cell (i, j) has id i*m + j."""
    edges = []
    for i in range(k):
        for j in range(m):
            if j + 1 < m:
                edges.append((i * m + j, i * m + j + 1))
            if i + 1 < k:
                edges.append((i * m + j, (i + 1) * m + j))
    return Graph(k * m, edges)


def grid_apex(k: int, m: int) -> Graph:
    """k x m grid plus one apex per row adjacent to the whole row.

    Grid vertex v_ij has id i*m + j; the apex w_i of row i has id k*m + i.
    """
    if k < 1 or m < 1:
        raise InputError("dimensions must be positive")
    base = grid(k, m)
    edges = base.edges()
    for i in range(k):
        edges.extend((i * m + j, k * m + i) for j in range(m))
    return Graph(k * m + k, edges)


def random_degenerate(n: int, d: int, seed: int, connected: bool = True) -> Graph:
    """Random d-degenerate graph: vertex i picks at most d neighbours among 0..i-1."""
    rng = random.Random(seed)
    edges = []
    for i in range(1, n):
        hi = min(i, d)
        lo = 1 if connected else 0
        if hi < lo:
            continue
        for j in rng.sample(range(i), rng.randint(lo, hi)):
            edges.append((j, i))
    return Graph(n, edges)


def random_connected(n: int, extra: int, seed: int) -> Graph:
    """Random spanning tree plus `extra` random additional edges."""
    rng = random.Random(seed)
    edges = set()
    for i in range(1, n):
        edges.add((rng.randrange(i), i))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    rng.shuffle(pairs)
    edges.update(pairs[:extra])
    return Graph(n, sorted(edges))


def random_bipartite_incidence(universe: int, families: int, seed: int, density: float = 0.5):
    """Random set system and its incidence graph.

    Returns (graph, fams) where fams[j] is a non-empty subset of range(universe),
    element e is vertex e and family j is vertex universe + j.
    """
    if universe < 1 or families < 1:
        raise InputError("need at least one element and one family")
    rng = random.Random(seed)
    fams = []
    for _ in range(families):
        s = {e for e in range(universe) if rng.random() < density}
        if not s:
            s = {rng.randrange(universe)}
        fams.append(frozenset(s))
    edges = [(e, universe + j) for j, s in enumerate(fams) for e in sorted(s)]
    return Graph(universe + families, edges), fams


# edge-list IO

def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise InputError("edge list must start with a 'n m' header")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        pairs = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise InputError(f"malformed edge list: {exc}") from None
    if len(pairs) != m:
        raise InputError(f"header declares {m} edges, found {len(pairs)}")
    seen = set()
    for u, v in pairs:
        if u == v:
            raise InputError(f"self-loop at {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise InputError(f"duplicate edge {key}")
        seen.add(key)
    return Graph(n, pairs)


def read_edge_list(path) -> Graph:
    with open(path) as fh:
        return parse_edge_list(fh.read())


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_edge_list(g))
