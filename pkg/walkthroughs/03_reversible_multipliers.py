"""
Grade-school and Karatsuba multipliers built from reversible blocks.

Run:  python walkthroughs/03_reversible_multipliers.py
"""
import random

from qconvmul.reversible import build_grade_school, build_karatsuba, multiply_reversible

gs = build_grade_school(4)
print("grade-school n=4:", gs.circuit.num_qubits, "qubits,", gs.circuit.gate_count(), "gates")
print("  8 * 9 =", multiply_reversible(gs, 8, 9))

for n in (8, 16):
    mc = build_karatsuba(n)
    rng = random.Random(n)
    x, y = rng.randrange(2**n), rng.randrange(2**n)
    print(f"karatsuba n={n}: {mc.circuit.num_qubits} qubits, {x} * {y} = {multiply_reversible(mc, x, y)}")

# Registers and ancillas are listed in the layout.
for name, qubits in build_karatsuba(8).circuit.layout.items():
    print(f"  {name:14s} {len(qubits)} qubits")

# With uncompute=True the product is copied out and all scratch is restored.
clean = build_karatsuba(8, uncompute=True)
print("uncomputed karatsuba n=8 garbage qubits:", len(clean.circuit.layout["garbage"]))
