"""
The convolution-theorem multiplier on the 8616 x 4532 instance: exact
statevector run, a sampled run, and amplitude amplification.

Run:  python walkthroughs/04_convolution_multiplier.py
"""
import math

from qconvmul.amplification import amplification_sweep, amplified_multiply, plan_amplification
from qconvmul.convolution import multiply_exact, multiply_sampled, plan_registers, success_probability

a, b = 8616, 4532
plan = plan_registers(a, b)
print(f"k={plan.k} qubits per register, D={plan.D}, weights {plan.w_a} and {plan.w_b}")

exact = multiply_exact(a, b)
print("coefficients:", {j: c for j, c in enumerate(exact.coefficients) if c})
print("product:", exact.product, " branch probability:", exact.success_probability)

hist, kept, sampled = multiply_sampled(a, b, 10**6, seed=20240517)
sigma = math.sqrt(0.06875 * 0.93125 / 10**6)
print(f"sampled: kept {kept} of 10**6 (expected 68750 +- {3 * sigma * 10**6:.0f}), product {sampled.product}")

amp_plan = plan_amplification(success_probability(a, b))
print(f"amplification: theta={amp_plan.theta:.5f}, n_opt={amp_plan.n_opt}, p_final={amp_plan.p_final:.4f}")
for row in amplification_sweep(a, b, 4):
    print(f"  m={row['m']}  statevector={row['measured']:.6f}  closed form={row['closed_form']:.6f}")
print("amplified product:", amplified_multiply(a, b).product)

# Scaling of the branch probability for two operand families.
for n in (4, 16, 64):
    ones, top = 2**n - 1, 2 ** (n - 1)
    print(f"n={n:3d}  all-ones p={success_probability(ones, ones):.4f}  "
          f"single-bit p={success_probability(top, top):.4f}")
