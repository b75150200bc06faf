"""
Classifying two-level designs
=============================

Three small designs in four factors, one from each non-trivial class.
"""

from ffclass import classify, parse_design

# A regular half fraction defined by x1*x2*x3*x4 = 1.
regular = parse_design("""
 1  1  1  1
 1  1 -1 -1
 1 -1  1 -1
 1 -1 -1  1
-1  1  1 -1
-1  1 -1  1
-1 -1  1  1
-1 -1 -1 -1
""")

# Drop one run: still inside the same hyperplane, so a subset fraction.
subset = parse_design("\n".join(" ".join(map(str, run)) for run in regular.runs[:7]))

# Five runs whose binary images span all of F_2^4 affinely.
afd = parse_design("""
 1  1  1  1
 1  1 -1 -1
 1 -1  1 -1
-1  1  1 -1
-1 -1 -1  1
""")

for name, design in [("regular", regular), ("subset", subset), ("afd", afd)]:
    res = classify(design)
    print(f"{name:>8}: class={res.design_class.value:<8} affine_dim={res.affine_dim}")
    for rel in res.relations:
        print(f"{'':>10}{rel}")

# The result is also available as JSON-ready data.
print(classify(subset).to_json())
