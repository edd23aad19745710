"""Instance generators and independent reference checks shared by the tests."""

import itertools
import random

import networkx as nx

from lossykernel.graph import Graph, contains_biclique


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def from_nx(h) -> Graph:
    h = nx.convert_node_labels_to_integers(h)
    return Graph(h.number_of_nodes(), h.edges())


def random_tree_edges(n, rng):
    return [(rng.randrange(v), v) for v in range(1, n)]


def random_connected(n, extra, rng):
    edges = set(random_tree_edges(n, rng))
    tries = 0
    while n > 1 and len(edges) < n - 1 + extra and tries < 50 * (extra + 1):
        tries += 1
        u, v = sorted(rng.sample(range(n), 2))
        edges.add((u, v))
    return Graph(n, edges)


def random_connected_subset(g: Graph, size, rng):
    start = rng.randrange(g.n)
    seen = [start]
    frontier = set(g.adj[start])
    while len(seen) < size and frontier:
        v = rng.choice(sorted(frontier))
        frontier.discard(v)
        seen.append(v)
        frontier |= set(g.adj[v]) - set(seen)
    return frozenset(seen)


def kdd_free(n, d, rng, hub=False, extra=None):
    """Random connected K_{d,d}-free graph (rejection on contains_biclique).

    d=2 grows a tree and adds chords that keep it C4-free; d=3 uses 2-degenerate
    graphs, which never contain K_{3,3}. With hub=True vertex 0 is universal.
    """
    if hub:
        edges = {(0, v) for v in range(1, n)}
        if d == 2:
            # a matching among the other vertices keeps the graph C4-free
            vs = list(range(1, n))
            rng.shuffle(vs)
            for a, b in zip(vs[::2], vs[1::2]):
                if rng.random() < 0.5:
                    edges.add((min(a, b), max(a, b)))
        else:
            for v in range(2, n):
                if rng.random() < 0.7:
                    edges.add((rng.randrange(1, v), v))
        g = Graph(n, edges)
        assert not contains_biclique(g, d)
        return g
    extra = rng.randrange(0, n // 2 + 1) if extra is None else extra
    if d == 2:
        edges = set(random_tree_edges(n, rng))
        for _ in range(4 * extra):
            u, v = sorted(rng.sample(range(n), 2))
            if (u, v) in edges:
                continue
            g = Graph(n, edges | {(u, v)})
            if not contains_biclique(g, 2):
                edges.add((u, v))
            if len(edges) >= n - 1 + extra:
                break
        return Graph(n, edges)
    edges = set()
    for v in range(1, n):
        k = min(v, rng.choice((1, 2)))
        for u in rng.sample(range(v), k):
            edges.add((u, v))
    return Graph(n, edges)


def small_cds_graph(n, backbone, d, rng, extra=3):
    """Connected K_{d,d}-free graph whose first `backbone` vertices form a path
    dominating everything, so the connected domination number is at most `backbone`."""
    for _ in range(200):
        edges = {(i, i + 1) for i in range(backbone - 1)}
        for v in range(backbone, n):
            edges.add((rng.randrange(backbone), v))
        g = Graph(n, edges)
        for _ in range(extra * 4):
            u, v = sorted(rng.sample(range(backbone, n), 2)) if n - backbone >= 2 else (0, 0)
            if u == v or (u, v) in edges:
                continue
            cand = Graph(n, edges | {(u, v)})
            if not contains_biclique(cand, d):
                edges.add((u, v))
                g = cand
        if not contains_biclique(g, d):
            return g
    raise RuntimeError("could not build a K_{d,d}-free instance")


def brute_connected_sets(g: Graph, max_size):
    """All connected vertex sets of size <= max_size, by plain subset enumeration."""
    h = to_nx(g)
    out = set()
    for size in range(1, max_size + 1):
        for s in itertools.combinations(range(g.n), size):
            if nx.is_connected(h.subgraph(s)):
                out.add(s)
    return out


def brute_group_steiner(g: Graph, groups):
    """Minimum connected set meeting every group, by subset enumeration (networkx connectivity)."""
    h = to_nx(g)
    groups = [set(x) for x in groups]
    for size in range(1, g.n + 1):
        for s in itertools.combinations(range(g.n), size):
            ss = set(s)
            if all(ss & grp for grp in groups) and nx.is_connected(h.subgraph(s)):
                return size
    return float("inf")


def brute_profile(g: Graph, u, A, r):
    """Shortest A-avoiding path lengths from u by enumerating every simple path of length <= r."""
    best = {a: float("inf") for a in A}

    def walk(v, depth, seen):
        if depth > 0 and v in A:
            best[v] = min(best[v], depth)
            return
        if depth == r:
            return
        for w in g.adj[v]:
            if w not in seen:
                walk(w, depth + 1, seen | {w})

    walk(u, 0, {u})
    return best


def seeded(seed):
    return random.Random(seed)
