"""
Exact classical reference arithmetic.

Everything here operates on Python ints (arbitrary precision) and plain
lists of small non-negative ints. Digit vectors are little-endian: index j
carries weight 2**j, so index j lines up with basis state |j> of the
digit-superposition encoding used by the convolution multiplier.

The DFT convention is the unitary one, entry (j, k) = w**(j*k) / sqrt(D)
with w = exp(2*pi*i/D). That is the same matrix the QFT implements, and
with it the convolution theorem reads

    dft(f) * dft(g) == dft(f (*) g) / sqrt(D)
"""
from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .errors import LengthError, PrecisionError


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def next_power_of_two(n: int) -> int:
    """Smallest power of two >= n (n >= 1)."""
    return 1 << max(0, (n - 1).bit_length())


def to_digit_vector(x: int, length: int) -> list[int]:
    """Binary digits of ``x``, little-endian, zero padded to ``length``."""
    if x < 0:
        raise ValueError("only non-negative integers have digit vectors")
    if not is_power_of_two(length):
        raise LengthError(f"digit vector length must be a power of two, got {length}")
    if x.bit_length() > length:
        raise LengthError(f"{x} needs {x.bit_length()} digits, only {length} available")
    return [(x >> j) & 1 for j in range(length)]


def from_coefficients(coeffs: Sequence[int]) -> int:
    """Sum of ``coeffs[j] * 2**j``; this is where deferred carries get resolved."""
    total = 0
    for j, c in enumerate(coeffs):
        total += int(c) << j
    return total


def convolve_direct(f: Sequence[int], g: Sequence[int]) -> list[int]:
    """Cyclic convolution ``h[j] = sum_i f[i] * g[(j - i) mod D]`` by the definition."""
    if len(f) != len(g):
        raise LengthError(f"length mismatch: {len(f)} vs {len(g)}")
    d = len(f)
    h = [0] * d
    for i, fi in enumerate(f):
        if not fi:
            continue
        for m, gm in enumerate(g):
            if gm:
                h[(i + m) % d] += fi * gm
    return h


def dft(v) -> np.ndarray:
    """Unitary DFT with positive exponent (the QFT matrix)."""
    return np.fft.ifft(np.asarray(v, dtype=complex), norm="ortho")


def idft(v) -> np.ndarray:
    return np.fft.fft(np.asarray(v, dtype=complex), norm="ortho")


def fft_multiply(x: int, y: int) -> int:
    """
    Multiply through the frequency domain in double precision.

    Raises PrecisionError if any recovered coefficient is 0.5 or more away
    from an integer, since rounding would then be a guess.
    """
    if x < 0 or y < 0:
        raise ValueError("operands must be non-negative")
    if x == 0 or y == 0:
        return 0
    d = next_power_of_two(x.bit_length() + y.bit_length())
    fx = dft(to_digit_vector(x, d))
    fy = dft(to_digit_vector(y, d))
    coeffs = idft(fx * fy).real * np.sqrt(d)
    rounded = np.rint(coeffs)
    residue = float(np.max(np.abs(coeffs - rounded)))
    if residue >= 0.5:
        raise PrecisionError(f"rounding residue {residue:.3g} at D={d}")
    return from_coefficients(int(c) for c in rounded)


class KaratsubaStep(NamedTuple):
    high_x: int
    low_x: int
    high_y: int
    low_y: int
    u: int
    v: int
    w: int
    z: int
    product: int


def _karatsuba(x: int, y: int, m: int) -> int:
    if m <= 4:
        return x * y
    return _split(x, y, m).product


def _split(x: int, y: int, m: int) -> KaratsubaStep:
    h = m // 2
    mask = (1 << h) - 1
    x1, x2 = x >> h, x & mask
    y1, y2 = y >> h, y & mask
    u = _karatsuba(x1, y1, m - h)
    v = _karatsuba(x2, y2, h)
    # the sums carry one extra bit; widen rather than reduce
    w = _karatsuba(x1 + x2, y1 + y2, max(m - h, h) + 1)
    z = w - (u + v)
    p = (u << (2 * h)) + (z << h) + v
    return KaratsubaStep(x1, x2, y1, y2, u, v, w, z, p)


def _check_karatsuba_args(x: int, y: int, n: int) -> None:
    if not is_power_of_two(n):
        raise ValueError(f"bit size must be a power of two, got {n}")
    if not (0 <= x < 1 << n and 0 <= y < 1 << n):
        raise ValueError(f"operands must lie in [0, 2**{n})")


def karatsuba_classical(x: int, y: int, n: int) -> int:
    """Karatsuba product of two n-bit numbers; direct multiplication at n <= 4."""
    _check_karatsuba_args(x, y, n)
    return _karatsuba(x, y, n)


def karatsuba_step(x: int, y: int, n: int) -> KaratsubaStep:
    """One top-level split of the recursion, exposing U, V, W and Z."""
    _check_karatsuba_args(x, y, n)
    if n < 2:
        raise ValueError("a split needs n >= 2")
    return _split(x, y, n)
