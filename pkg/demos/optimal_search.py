"""
Exhaustive optimal design search
================================

Enumerate every 4-factor, 6-run design (with the all-ones run fixed) and
report the D-, A- and E-optimal ones.
"""

from ffclass.core import format_design
from ffclass.search import exhaustive_search, optimal_sets

for criterion in ("d", "a", "e"):
    res = exhaustive_search(4, 6, criterion, threads=2)
    print(f"[{criterion}] value={res.value_string()} evaluated={res.num_evaluated} "
          f"maximizers={res.num_maximizers} class={res.classification.design_class.value}")

best = exhaustive_search(4, 6, "d")
print(format_design(best.best_design))

# Compare the full argmax sets.
sets = optimal_sets(4, 5)
d = sets["d"][1]
print("s=4, r=5: |D| =", len(d), " A == D:", sets["a"][1] == d, " E == D:", sets["e"][1] == d)
