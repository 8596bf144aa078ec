import json
import math
import random

import numpy as np
import pytest

from _support import random_state
from qconvmul import engine
from qconvmul.amplification import (
    amplification_sweep,
    amplified_multiply,
    amplified_states,
    apply_grover,
    good_probability,
    grover_operator,
    optimal_iterations,
    plan_amplification,
    reflection_about_zero,
)
from qconvmul.convolution import coefficient_state, main_circuit, multiply_exact, plan_registers, success_probability
from qconvmul.engine import Statevector, apply_circuit, postselect_zero


def test_plan_worked_example():
    plan = plan_amplification(0.06875)
    assert plan.theta == pytest.approx(math.asin(math.sqrt(0.06875)), abs=1e-15)
    assert plan.theta == pytest.approx(0.2653, abs=1e-4)
    assert plan.n_opt == 3
    assert plan.p_final == pytest.approx(0.920, abs=1e-3)


def test_plan_exact_cases():
    plan = plan_amplification(0.25)
    assert plan.theta == pytest.approx(math.pi / 6)
    assert plan.n_opt == 1 and plan.p_final == pytest.approx(1.0, abs=1e-15)
    plan = plan_amplification(1.0)
    assert plan.n_opt == 0 and plan.p_final == pytest.approx(1.0)
    with pytest.raises(ValueError):
        plan_amplification(0.0)
    with pytest.raises(ValueError):
        plan_amplification(1.5)


def test_plan_json():
    d = json.loads(plan_amplification(0.25).to_json())
    assert set(d) >= {"p0", "theta", "n_opt", "p_final"}


def test_optimal_iterations_is_nearest_integer():
    for theta in np.linspace(0.01, math.pi / 2, 200):
        n = optimal_iterations(theta)
        x = math.pi / (4 * theta)
        assert abs(n - x) <= 0.5 + 1e-9


def test_plan_never_loses_probability_by_much():
    # n is pi/(4 theta) rounded, so (2n+1) theta lands within 2 theta of pi/2
    for p0 in np.geomspace(1e-4, 0.2, 40):
        plan = plan_amplification(p0)
        assert plan.p_final >= math.cos(2 * plan.theta) ** 2 - 1e-12


def test_planned_count_is_not_always_the_argmax():
    # on the worked pair two steps would give 0.941; the rounded rule picks three
    theta = math.asin(math.sqrt(0.06875))
    assert good_probability(theta, 2) > good_probability(theta, 3)
    assert plan_amplification(0.06875).n_opt == 3


def test_reflection_circuit_matches_direct_flip():
    rng = np.random.default_rng(1)
    s = Statevector(random_state(4, rng))
    via_gates = apply_circuit(s, reflection_about_zero(4, [1, 3]))
    direct = engine.phase_flip_zero(s, [1, 3])
    assert np.allclose(via_gates.amplitudes, direct.amplitudes, atol=1e-14)


@pytest.mark.parametrize("a,b", [(8616, 4532), (5, 3), (1, 1)])
def test_grover_circuit_matches_direct(a, b):
    plan = plan_registers(a, b)
    main = main_circuit(a, b, plan)
    q = grover_operator(main, plan.b_qubits)
    s = apply_circuit(engine.zero_state(2 * plan.k), main)
    assert np.allclose(apply_circuit(s, q).amplitudes,
                       apply_grover(s, main, plan.b_qubits).amplitudes, atol=1e-12)


def test_grover_step_preserves_norm():
    rng = np.random.default_rng(2)
    plan = plan_registers(100, 37)
    main = main_circuit(100, 37, plan)
    for _ in range(5):
        s = Statevector(random_state(2 * plan.k, rng))
        assert abs(apply_grover(s, main, plan.b_qubits).norm() - 1) < 1e-10


def test_first_step_on_worked_example():
    states = dict(amplified_states(8616, 4532, 3))
    plan = plan_registers(8616, 4532)
    theta = math.asin(math.sqrt(0.06875))
    p1 = engine.zero_branch_probability(states[1], plan.b_qubits)
    assert p1 == pytest.approx(math.sin(3 * theta) ** 2, abs=1e-9)
    assert p1 == pytest.approx(0.5105, abs=1e-4)
    p3 = engine.zero_branch_probability(states[3], plan.b_qubits)
    assert abs(p3 - plan_amplification(0.06875).p_final) < 1e-9


def test_rotation_law_random_pairs():
    rng = random.Random(17)
    for _ in range(5):
        a, b = rng.randrange(1, 2**7), rng.randrange(1, 2**7)
        for row in amplification_sweep(a, b, 6):
            assert abs(row["measured"] - row["closed_form"]) < 1e-9
        assert amplification_sweep(a, b, 0)[0]["measured"] == pytest.approx(success_probability(a, b), abs=1e-12)


def test_branch_invariance():
    rng = random.Random(5)
    for _ in range(5):
        a, b = rng.randrange(1, 2**8), rng.randrange(1, 2**8)
        plan = plan_registers(a, b)
        base, _ = postselect_zero(engine.apply_circuit(engine.zero_state(2 * plan.k), main_circuit(a, b, plan)),
                                  plan.b_qubits)
        for m, state in amplified_states(a, b, 4):
            try:
                kept, _ = postselect_zero(state, plan.b_qubits)
            except Exception:
                continue  # amplified onto the bad branch entirely
            overlap = abs(np.vdot(base.amplitudes, kept.amplitudes))
            assert overlap == pytest.approx(1.0, abs=1e-9)


def test_amplified_multiply_examples():
    out = amplified_multiply(8616, 4532)
    assert out.product == 39_047_712
    assert out.iterations == 3
    assert out.success_probability == pytest.approx(0.920, abs=1e-3)
    one = amplified_multiply(1, 1)
    assert one.iterations == 1 and one.product == 1
    assert one.success_probability == pytest.approx(0.5, abs=1e-12)


def test_zero_iterations_match_exact():
    for a, b in [(8616, 4532), (77, 9)]:
        amp, ex = amplified_multiply(a, b, 0), multiply_exact(a, b)
        assert amp.coefficients == ex.coefficients
        assert amp.success_probability == pytest.approx(ex.success_probability, abs=1e-12)


def test_good_probability_is_periodic_in_steps():
    theta = math.pi / 4
    assert all(good_probability(theta, m) == pytest.approx(0.5) for m in range(5))


def test_iteration_count_grows_like_sqrt_n_on_single_bit_family():
    ratios = []
    for n in (4, 8, 16, 32, 64, 128):
        top = 2 ** (n - 1)
        ratios.append(plan_amplification(success_probability(top, top)).n_opt / math.sqrt(n))
    assert max(ratios) / min(ratios) <= 4
