"""
Multiplication through a quantum convolution theorem.

An integer x with set bits {j} is stored on k qubits as the uniform
superposition (1/sqrt(w)) sum_j |j>, w being the Hamming weight; D = 2**k
must be at least bits(a) + bits(b) so the cyclic convolution never wraps.
The pipeline on a 2k-qubit joint state (register a on qubits 0..k-1,
register b on k..2k-1) is

    encode a, encode b -> QFT a, QFT b -> CNOT a_i -> b_i
    -> postselect b = |0...0> -> inverse QFT a

After postselection register a holds F(f) * F(g) normalized, which is
F(f (*) g) / sqrt(D) up to scale, so the inverse QFT leaves the
convolution coefficients c_j (normalized) in the amplitudes. The branch
probability is ||c||**2 / (D * w_a * w_b), which gives ||c|| back and
lets the integer coefficients be recovered by rounding.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import engine
from .classical import convolve_direct, dft, from_coefficients, idft, to_digit_vector
from .engine import Circuit, Gate, GateOp, Histogram, Statevector
from .errors import InsufficientShotsError, PrecisionError

OUTCOME_SCHEMA = "qconvmul.outcome/1"


@dataclass(frozen=True)
class RegisterPlan:
    k: int
    D: int
    w_a: int
    w_b: int

    @property
    def z_a(self) -> float:
        return math.sqrt(self.w_a)

    @property
    def z_b(self) -> float:
        return math.sqrt(self.w_b)

    @property
    def a_qubits(self) -> tuple[int, ...]:
        return tuple(range(self.k))

    @property
    def b_qubits(self) -> tuple[int, ...]:
        return tuple(range(self.k, 2 * self.k))


def plan_registers(a: int, b: int) -> RegisterPlan:
    if a < 1 or b < 1:
        raise ValueError("both operands must be >= 1 (zero has no digit state)")
    k = max(1, (a.bit_length() + b.bit_length() - 1).bit_length())
    return RegisterPlan(k, 2**k, a.bit_count(), b.bit_count())


def digit_amplitudes(x: int, k: int) -> np.ndarray:
    if x < 1:
        raise ValueError("zero has no digit state")
    v = np.asarray(to_digit_vector(x, 2**k), dtype=float)
    return v / math.sqrt(x.bit_count())


def _preparation_matrix(target: np.ndarray) -> np.ndarray:
    # Householder reflection sending |0> to the (real, unit) target
    d = target.size
    e0 = np.zeros(d)
    e0[0] = 1.0
    v = e0 - target
    nv = v @ v
    if nv < 1e-30:
        return np.eye(d)
    return np.eye(d) - 2.0 * np.outer(v, v) / nv


def encoder_circuit(x: int, k: int) -> Circuit:
    """k-qubit circuit mapping |0> to the digit state of ``x``."""
    c = Circuit(k)
    c.add(Gate.UNITARY, *range(k), matrix=_preparation_matrix(digit_amplitudes(x, k)))
    return c


def prepare_digit_state(x: int, k: int) -> Statevector:
    if x >= 1 and x.bit_length() > 2**k:
        raise ValueError(f"{x} needs {x.bit_length()} digit slots, k={k} gives {2**k}")
    return engine.apply_circuit(engine.zero_state(k), encoder_circuit(x, k))


def qft_circuit(k: int, inverse: bool = False) -> Circuit:
    """
    QFT on k qubits: |j> -> (1/sqrt(D)) sum_l exp(2 pi i j l / D) |l>.

    k Hadamards, k(k-1)/2 controlled phases and floor(k/2) swaps.
    """
    if k < 1:
        raise ValueError("QFT needs at least one qubit")
    c = Circuit(k)
    for j in reversed(range(k)):
        c.add(Gate.H, j)
        for m in reversed(range(j)):
            c.add(Gate.CPHASE, m, j, k=j - m + 1)
    for i in range(k // 2):
        c.add(Gate.SWAP, i, k - 1 - i)
    return c.inverse() if inverse else c


def elementwise_circuit(k: int) -> Circuit:
    """CNOT from a_i to b_i for every i; all gates commute (depth 1)."""
    c = Circuit(2 * k, layout={"a": range(k), "b": range(k, 2 * k)})
    for i in range(k):
        c.add(Gate.CNOT, i, k + i)
    return c


def main_circuit(a: int, b: int, plan: RegisterPlan | None = None) -> Circuit:
    """Encoders, both QFTs and the CNOT ladder; the state just before measuring b."""
    plan = plan or plan_registers(a, b)
    k = plan.k
    c = Circuit(2 * k, layout={"a": plan.a_qubits, "b": plan.b_qubits})
    c.compose(encoder_circuit(a, k), plan.a_qubits)
    c.compose(encoder_circuit(b, k), plan.b_qubits)
    qft = qft_circuit(k)
    c.compose(qft, plan.a_qubits)
    c.compose(qft, plan.b_qubits)
    c.compose(elementwise_circuit(k))
    return c


def inverse_qft_on_a(plan: RegisterPlan) -> Circuit:
    c = Circuit(2 * plan.k, layout={"a": plan.a_qubits, "b": plan.b_qubits})
    return c.compose(qft_circuit(plan.k, inverse=True), plan.a_qubits)


def success_probability(a: int, b: int) -> float:
    """Exact postselection probability ||a (*) b||**2 / (D w_a w_b), via direct convolution."""
    plan = plan_registers(a, b)
    conv = convolve_direct(to_digit_vector(a, plan.D), to_digit_vector(b, plan.D))
    return sum(c * c for c in conv) / (plan.D * plan.w_a * plan.w_b)


@dataclass
class ConvolutionOutcome:
    a: int
    b: int
    k: int
    D: int
    coefficients: list[int]
    product: int
    success_probability: float
    mode: str
    shots: int | None = None
    seed: int | None = None
    iterations: int = 0
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema": OUTCOME_SCHEMA,
            "a": str(self.a),
            "b": str(self.b),
            "k": self.k,
            "D": self.D,
            "coefficients": {str(j): c for j, c in enumerate(self.coefficients) if c},
            "product": str(self.product),
            "success_probability": self.success_probability,
            "shots": "exact" if self.shots is None else self.shots,
            "seed": self.seed,
            "mode": self.mode,
            "iterations": self.iterations,
            **self.extra,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def decode_amplitudes(amps: np.ndarray, scale: float, tolerance: float = 0.25) -> list[int]:
    """Round ``amps * scale`` to integers, refusing residues at or above ``tolerance``."""
    imag = float(np.max(np.abs(amps.imag)))
    if imag >= 1e-9:
        raise PrecisionError(f"output amplitudes have imaginary parts up to {imag:.3g}")
    raw = amps.real * scale
    rounded = np.rint(raw)
    residue = float(np.max(np.abs(raw - rounded)))
    if residue >= tolerance:
        raise PrecisionError(f"coefficient rounding residue {residue:.3g}")
    if rounded.min() < 0:
        raise PrecisionError("negative coefficient recovered")
    return [int(c) for c in rounded]


def coefficient_norm(plan: RegisterPlan, p: float) -> float:
    """||c|| from the branch probability p = ||c||**2 / (D w_a w_b)."""
    return math.sqrt(p * plan.D) * plan.z_a * plan.z_b


def _fits_dense(plan: RegisterPlan) -> bool:
    return 4**plan.k <= engine.memory_cap()


def coefficient_state(a: int, b: int, plan: RegisterPlan | None = None, mode: str = "auto"):
    """
    Normalized register-a amplitudes after postselection and inverse QFT,
    plus the postselection probability.

    ``mode`` is "statevector" (joint 2k-qubit simulation), "analytic"
    (the two D-vectors transformed and multiplied separately) or "auto",
    which picks statevector whenever it fits the memory cap.
    """
    plan = plan or plan_registers(a, b)
    if mode == "auto":
        mode = "statevector" if _fits_dense(plan) else "analytic"
    if mode == "statevector":
        state = engine.apply_circuit(engine.zero_state(2 * plan.k), main_circuit(a, b, plan))
        kept, p = engine.postselect_zero(state, plan.b_qubits)
        out = engine.apply_circuit(kept, inverse_qft_on_a(plan))
        return out.amplitudes[: plan.D], p, mode
    if mode == "analytic":
        alpha = dft(digit_amplitudes(a, plan.k))
        beta = dft(digit_amplitudes(b, plan.k))
        gamma = alpha * beta
        p = float(np.vdot(gamma, gamma).real)
        return idft(gamma) / math.sqrt(p), p, mode
    raise ValueError(f"unknown mode {mode!r}")


def multiply_exact(a: int, b: int, mode: str = "auto") -> ConvolutionOutcome:
    plan = plan_registers(a, b)
    amps, p, mode = coefficient_state(a, b, plan, mode)
    coeffs = decode_amplitudes(amps, coefficient_norm(plan, p))
    return ConvolutionOutcome(a, b, plan.k, plan.D, coeffs, from_coefficients(coeffs), p, mode)


def measurement_circuit(a: int, b: int, plan: RegisterPlan | None = None) -> Circuit:
    """Main circuit followed by the inverse QFT on register a; what gets measured."""
    plan = plan or plan_registers(a, b)
    return main_circuit(a, b, plan).compose(inverse_qft_on_a(plan))


def coefficients_from_counts(hist: Histogram, plan: RegisterPlan) -> list[int]:
    """
    Estimate c_j = sqrt(p_j) * s from register-a counts of postselected shots.

    s comes from sum_j c_j = w_a * w_b rather than from the kept-shot rate.
    """
    if hist.shots == 0:
        raise InsufficientShotsError("no shots survived postselection")
    root = np.zeros(plan.D)
    for j, count in hist.counts.items():
        root[j] = math.sqrt(count / hist.shots)
    scale = plan.w_a * plan.w_b / root.sum()
    return [int(c) for c in np.rint(root * scale)]


def multiply_sampled(a: int, b: int, shots: int, seed=None) -> tuple[Histogram, int, ConvolutionOutcome]:
    """
    Sample the measured joint state and decode from the postselected shots.

    Returns the register-a histogram over kept shots, the kept count and
    the outcome (its success_probability is the observed kept fraction).
    """
    plan = plan_registers(a, b)
    state = engine.apply_circuit(engine.zero_state(2 * plan.k), measurement_circuit(a, b, plan))
    hist = engine.sample(state, shots, seed)
    a_hist = hist.conditioned_on_zero(plan.a_qubits, plan.b_qubits)
    kept = a_hist.shots
    if kept == 0:
        raise InsufficientShotsError(f"none of {shots} shots left register b at |0...0>")
    coeffs = coefficients_from_counts(a_hist, plan)
    outcome = ConvolutionOutcome(
        a, b, plan.k, plan.D, coeffs, from_coefficients(coeffs), kept / shots,
        "sampled", shots=shots, seed=seed, extra={"kept_shots": kept},
    )
    return a_hist, kept, outcome
