"""Distance-r domination: profile classes and the r-kernel.

Vertices outside the core X are grouped by how far they sit from each core
vertex along paths that avoid X. The kernel keeps one Steiner tree per small
group of classes, so the reduced graph keeps every short connection.

Run: python3 demos/distance_r_kernel.py
"""

from lossykernel import AnnotatedInstance, RKernelParams, certified_core, exact_min_dominator, r_lift, r_lossy_kernel
from lossykernel.graph import Graph
from lossykernel.rkernel import profile_classes

r, k, alpha = 2, 1, 2.0
# a spider: eight legs of length two hanging off vertex 0
edges = []
for leg in range(8):
    a, b = 1 + 2 * leg, 2 + 2 * leg
    edges += [(0, a), (a, b)]
g = Graph(17, edges)
params = RKernelParams.from_alpha(r, alpha)
print(f"spider: {g.n} vertices; r={r}, k={k}, alpha={alpha} -> t={params.t}")

X = certified_core(g, k, r)
classes = profile_classes(g, X, r)
print(f"(k,r)-core of size {len(X)}; {len(classes)} profile classes outside it")

out = r_lossy_kernel(g, k, params, fallback=False)
red = out.reduced
print(f"reduced graph: {red.graph.n} vertices (from {g.n})")

opt = min(exact_min_dominator(g, r=r, connected=True).size, k + 1)
sol = exact_min_dominator(red.graph, red.Z, r=r, connected=True)
lifted = r_lift(AnnotatedInstance(g, frozenset(range(g.n)), k, r), out, sol.vertices)
print(f"capped optimum {opt}; reduced optimum {sol.size}; lifted value {lifted.value}")
print(f"ratio {lifted.value / opt:.2f} <= alpha: {lifted.value <= alpha * opt}")
