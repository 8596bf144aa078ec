"""
Amplitude amplification of the register-b = |0...0> branch.

With A the main circuit (encoders, QFTs, CNOT ladder) and
sin(theta)**2 = p0 the initial branch weight, one Grover step

    Q = A . S0 . A^dagger . S_P

(S_P flips the good branch, S0 flips |0...0> of all qubits) rotates the
state by 2 theta inside the plane spanned by the good and bad components.
After m steps the good weight is sin((2m + 1) theta)**2. Q here differs
from -S_psi S_P by a global sign only.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from . import engine
from .classical import from_coefficients
from .convolution import (
    ConvolutionOutcome,
    coefficient_norm,
    decode_amplitudes,
    inverse_qft_on_a,
    main_circuit,
    plan_registers,
)
from .engine import Circuit, Gate, Statevector

PLAN_SCHEMA = "qconvmul.amplification-plan/1"


@dataclass(frozen=True)
class AmplificationPlan:
    p0: float
    theta: float
    n_opt: int
    p_final: float

    def to_json(self) -> str:
        return json.dumps({"schema": PLAN_SCHEMA, **asdict(self)}, indent=2) + "\n"


def good_probability(theta: float, iterations: int) -> float:
    return math.sin((2 * iterations + 1) * theta) ** 2


def optimal_iterations(theta: float) -> int:
    # nearest integer to pi/(4 theta), exact halves rounded down
    x = math.pi / (4 * theta)
    return max(0, math.ceil(x - 0.5 - 1e-9))


def plan_amplification(p0: float) -> AmplificationPlan:
    if not 0 < p0 <= 1:
        raise ValueError(f"initial success probability must lie in (0, 1], got {p0}")
    theta = math.asin(math.sqrt(p0))
    n = optimal_iterations(theta)
    return AmplificationPlan(p0, theta, n, good_probability(theta, n))


def reflection_about_zero(num_qubits: int, qubits: Sequence[int]) -> Circuit:
    """Gate-level 1 - 2|0..0><0..0| on ``qubits``: X layer, multi-controlled Z, X layer."""
    c = Circuit(num_qubits)
    for q in qubits:
        c.add(Gate.X, q)
    c.add(Gate.MCZ, *qubits)
    for q in qubits:
        c.add(Gate.X, q)
    return c


def grover_operator(a_circuit: Circuit, good_qubits: Sequence[int]) -> Circuit:
    """Circuit for A . S0 . A^dagger . S_P, where S_P flips states with ``good_qubits`` all 0."""
    q = a_circuit.num_qubits
    c = Circuit(q, layout=a_circuit.layout)
    c.compose(reflection_about_zero(q, good_qubits))
    c.compose(a_circuit.inverse())
    c.compose(reflection_about_zero(q, range(q)))
    c.compose(a_circuit)
    return c


def apply_grover(state: Statevector, a_circuit: Circuit, good_qubits: Sequence[int],
                 a_inverse: Circuit | None = None) -> Statevector:
    """One Grover step with the reflections applied directly to the amplitudes."""
    a_inverse = a_inverse or a_circuit.inverse()
    state = engine.phase_flip_zero(state, good_qubits)
    state = engine.apply_circuit(state, a_inverse)
    state = engine.phase_flip_zero(state, range(state.num_qubits))
    return engine.apply_circuit(state, a_circuit)


def amplified_states(a: int, b: int, max_iterations: int):
    """Yield (m, state after m Grover steps) for m = 0..max_iterations."""
    plan = plan_registers(a, b)
    main = main_circuit(a, b, plan)
    main_inv = main.inverse()
    state = engine.apply_circuit(engine.zero_state(2 * plan.k), main)
    for m in range(max_iterations + 1):
        yield m, state
        if m < max_iterations:
            state = apply_grover(state, main, plan.b_qubits, main_inv)


def amplified_multiply(a: int, b: int, iterations="auto") -> ConvolutionOutcome:
    """
    Multiply with ``iterations`` Grover steps before postselecting register b.

    "auto" uses the planned count for the exact initial probability. The
    reported success_probability is the amplified branch weight; the
    decoded coefficients do not depend on the iteration count.
    """
    plan = plan_registers(a, b)
    main = main_circuit(a, b, plan)
    state = engine.apply_circuit(engine.zero_state(2 * plan.k), main)
    p0 = engine.zero_branch_probability(state, plan.b_qubits)
    if iterations == "auto":
        m = plan_amplification(p0).n_opt
    else:
        m = int(iterations)
        if m < 0:
            raise ValueError("iteration count must be non-negative")
    main_inv = main.inverse()
    for _ in range(m):
        state = apply_grover(state, main, plan.b_qubits, main_inv)
    kept, p = engine.postselect_zero(state, plan.b_qubits)
    amps = engine.apply_circuit(kept, inverse_qft_on_a(plan)).amplitudes[: plan.D]
    # Grover steps leave a global sign on the good branch
    lead = amps[np.argmax(np.abs(amps))]
    amps = amps * (abs(lead) / lead)
    coeffs = decode_amplitudes(amps, coefficient_norm(plan, p0))
    return ConvolutionOutcome(
        a, b, plan.k, plan.D, coeffs, from_coefficients(coeffs), p,
        "amplified", iterations=m, extra={"p0": p0},
    )


def amplification_sweep(a: int, b: int, max_iterations: int) -> list[dict]:
    """Measured good-branch weight against sin((2m + 1) theta)**2 for each m."""
    plan = plan_registers(a, b)
    rows = []
    theta = None
    for m, state in amplified_states(a, b, max_iterations):
        p = engine.zero_branch_probability(state, plan.b_qubits)
        if theta is None:
            theta = math.asin(math.sqrt(p))
        rows.append({"m": m, "measured": p, "closed_form": good_probability(theta, m)})
    return rows
