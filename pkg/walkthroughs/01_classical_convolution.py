"""
Integer multiplication as a convolution of bit vectors.

Run:  python walkthroughs/01_classical_convolution.py
"""
from qconvmul.classical import (
    convolve_direct,
    fft_multiply,
    from_coefficients,
    karatsuba_classical,
    karatsuba_step,
    to_digit_vector,
)

a, b = 8616, 4532

# Digits are little-endian: index j carries weight 2**j.
fa = to_digit_vector(a, 32)
fb = to_digit_vector(b, 32)
print("set bits of a:", [j for j, d in enumerate(fa) if d])
print("set bits of b:", [j for j, d in enumerate(fb) if d])

# The convolution has small integer entries; carrying them gives the product.
c = convolve_direct(fa, fb)
print("nonzero coefficients:", {j: v for j, v in enumerate(c) if v})
print("carried:", from_coefficients(c), "  a*b =", a * b)

# Same result through the FFT, and through Karatsuba's three half-size products.
print("fft_multiply:", fft_multiply(a, b))
print("karatsuba:   ", karatsuba_classical(a, b, 16))

step = karatsuba_step(13, 11, 4)
print("one Karatsuba split of 13*11:", step._asdict())
