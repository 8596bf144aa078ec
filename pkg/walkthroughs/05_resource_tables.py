"""
Depth, gate count and ancilla tables for the three multipliers.

Run:  python walkthroughs/05_resource_tables.py
"""
from qconvmul.resources import comparison_table, cost_crossover, karatsuba_closed_form, karatsuba_recursive

report = comparison_table([4, 8, 16])
print(report.to_csv())

print("Karatsuba cost first beats grade-school at n =", cost_crossover())

# The two ancilla bases disagree; both are shown.
for n in (4, 8, 16, 32):
    print(f"n={n:3d}  closed-form ancillas={float(karatsuba_closed_form(n).ancillas):9.2f}"
          f"  recursion from the n=4 base={karatsuba_recursive(n).ancillas}")
