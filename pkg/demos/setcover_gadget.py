"""The set cover gadget and what subdividing it does.

With r=1 the gadget is an exact reduction. Subdividing every edge r-1 times
keeps the graph recognisable as an exact subdivision, but at r=2 a small cover
no longer yields a small distance-r dominating set.

Run: python3 demos/setcover_gadget.py
"""

from lossykernel import SetCoverInstance, exact_set_cover, membership_check_Hp, reduce_to_rds
from lossykernel.reductions import rds_decision

sc = SetCoverInstance(2, [{0}, {0, 1}], 1)
print(f"universe 2, sets {[sorted(f) for f in sc.families]}, k={sc.k}: cover exists = "
      f"{exact_set_cover(sc.universe, sc.families, sc.k)}")
for r in (1, 2, 3):
    red = reduce_to_rds(sc, r)
    print(f"r={r}: {red.graph.n} vertices, k'={red.k_prime}, "
          f"exact {r}-subdivision: {membership_check_Hp(red.graph, r)}, "
          f"dominated within k': {rds_decision(red)}")
