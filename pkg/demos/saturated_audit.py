"""
Saturated D-optimal designs for r = 4..13
=========================================

Small orders are searched exhaustively; larger ones by seeded local search
until the known maximal determinant is reached.  Each attained matrix is
then classified by its 2-adic valuation and compared with the mod-8 rule.
"""

from ffclass.search import conjecture_audit, saturated_local_search
from ffclass.search.audit import HEADER

res = saturated_local_search(9, seed=0, target=14336)
print("r=9 local search:", res.best_value, "target reached:", res.extra["target_reached"])

print(HEADER)
for row in conjecture_audit(range(4, 14), seed=0):
    print(row.text())
