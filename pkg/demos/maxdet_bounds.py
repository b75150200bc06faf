"""
Maximal determinant bounds and the 2-adic rule
==============================================

For a saturated design (r runs, r - 1 factors) the square design matrix M
determines the class: the design is affinely full-dimensional iff 2^r does
not divide det M.  The known upper bounds for |det M| already tell which
side of that line a bound-attaining matrix falls on.
"""

from ffclass import bound_report, mod8_prediction, proposition_consistency, two_adic_valuation

print(f"{'r':>3} {'bound':>13} {'value':>22} {'v2':>4} {'mod8':>7}")
for r in range(4, 30):
    rep = bound_report(r)
    print(
        f"{r:>3} {rep.applicable_bound.value:>13} {rep.bound_value:>22} "
        f"{two_adic_valuation(rep.bound_value):>4} {mod8_prediction(r).value:>7}"
    )

# When the Barba or Ehlich-Wojtas bound is an integer the valuation
# argument can be checked directly.
for r in (5, 6, 10, 13, 14, 25, 26):
    rep = proposition_consistency(r)
    print(r, "vacuous" if rep.vacuous else f"v2={rep.valuation} side={rep.side.value} agrees={rep.agrees}")
