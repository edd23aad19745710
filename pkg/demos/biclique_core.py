"""Shrinking a domination core in a graph without K_{d,d}.

The core starts as V(G). Each round looks for a vertex whose removal keeps the
core property, using only the bipartite-free structure (no search over
solutions). We also show why the removal threshold must be set carefully.

Run: python3 demos/biclique_core.py
"""

from lossykernel import compute_core, core_bound, is_domination_core, reduce_core_once
from lossykernel.graph import Graph, contains_biclique, star

g = star(30)
traces = []
Z = compute_core(g, 1, 2, traces=traces)
print(f"star with 30 leaves, k=1, d=2: core of size {len(Z)} (bound {core_bound(1, 2)})")
print(f"{len(traces)} removals, first few removed vertices: {[t.z for t in traces[:5]]}")
print(f"still a core: {is_domination_core(g, Z, 1)}")

# vertex 0 sees everything and vertex 2 sees everything except 1
g = Graph(8, [(0, v) for v in range(1, 8)] + [(2, v) for v in range(3, 8)])
print(f"\nsecond graph contains K_3,3: {contains_biclique(g, 3)}")
full = frozenset(range(8))
for literal in (True, False):
    tr = reduce_core_once(g, full, 1, 3, literal=literal)
    ok = is_domination_core(g, full - {tr.z}, 1)
    name = "literal threshold" if literal else "sound threshold"
    print(f"{name}: removes {tr.z}, remaining set is a core: {ok}")
print("with 1 removed, the single vertex 2 dominates the rest but not vertex 1")
