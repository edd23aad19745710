"""Walk through the lossy CDS kernel on a graph with many twins.

Two adjacent hubs share twelve common neighbours. Every non-hub vertex looks
the same from a small core, so marking keeps only a few of them.

Run: python3 demos/cds_kernel_walkthrough.py
"""

from lossykernel import AnnotatedInstance, certified_core, exact_min_dominator, lift_solution, lossy_cds_kernel
from lossykernel.framework import core_partition
from lossykernel.graph import Graph

k, eps = 2, 1.0
n = 14
g = Graph(n, [(0, 1)] + [(h, v) for h in (0, 1) for v in range(2, n)])
print(f"input: {g.n} vertices, {g.m} edges, budget k={k}, eps={eps}")

# a domination core: any k-vertex set dominating Z dominates everything
Z = certified_core(g, k)
print(f"core Z has {len(Z)} vertices: {sorted(Z)}")
part = core_partition(g, Z)
print(f"outside Z the vertices fall into {len(part)} neighbourhood classes")

# fallback=False forces the marking route even though this instance is tiny
out = lossy_cds_kernel(g, k, eps, certified_core, fallback=False)
red = out.reduced.graph
print(f"reduced instance: {red.n} vertices, {red.m} edges")
print(f"kept vertices (original ids): {list(out.kept_map)}")

opt = min(exact_min_dominator(g, connected=True).size, k + 1)
sol = exact_min_dominator(red, out.reduced.Z, connected=True)
lifted = lift_solution(AnnotatedInstance(g, frozenset(range(g.n)), k), out, sol.vertices)
print(f"capped optimum on the input: {opt}")
print(f"optimum on the reduced instance: {sol.size}, lifted back to {sorted(lifted.solution)}")
print(f"lifted value {lifted.value}, ratio {lifted.value / opt:.2f} (allowed {1 + eps})")
