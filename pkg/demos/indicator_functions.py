"""
Indicator functions
===================

The indicator polynomial of a design has rational coefficients n_I / 2^s.
A design is affinely full-dimensional exactly when every non-constant
numerator is strictly smaller in magnitude than the constant one.
"""

from ffclass import classify_from_indicator, indicator_coefficients, parse_design, support
from ffclass.indicator import evaluate

design = parse_design("""
 1  1  1
 1 -1 -1
-1  1 -1
-1 -1  1
 1  1 -1
""")

poly = indicator_coefficients(design)
print("denominator:", poly.denominator)
for word, n in poly.terms():
    label = "*".join(f"x{j}" for j in word) or "1"
    print(f"  {label:<12} {n:>3}/{poly.denominator}")

# Evaluating the polynomial recovers membership.
print("f(1,1,1)  =", evaluate(poly, (1, 1, 1)))
print("f(-1,-1,-1) =", evaluate(poly, (-1, -1, -1)))

print("class from coefficients:", classify_from_indicator(poly).value)

# The inverse transform gives back the run set.
assert set(support(poly).runs) == set(design.runs)
