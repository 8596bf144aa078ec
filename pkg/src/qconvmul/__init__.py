"""
qconvmul: simulation lab for quantum integer multiplication.

Modules
-------
classical      exact reference arithmetic (digit vectors, convolution, FFT, Karatsuba)
engine         statevector simulator, sampling and the reversible backend
reversible     grade-school and Karatsuba reversible multiplier circuits
convolution    the convolution-theorem multiplier on digit-superposition states
amplification  Grover amplification of the postselected branch
resources      closed-form and recursive depth/cost/ancilla tables
cli            command-line front end (``python -m qconvmul``)
"""
from .amplification import AmplificationPlan, amplified_multiply, grover_operator, plan_amplification
from .classical import (
    convolve_direct,
    fft_multiply,
    from_coefficients,
    karatsuba_classical,
    to_digit_vector,
)
from .convolution import (
    ConvolutionOutcome,
    RegisterPlan,
    multiply_exact,
    multiply_sampled,
    plan_registers,
    success_probability,
)
from .engine import Circuit, Gate, GateOp, Histogram, Statevector, apply_circuit, zero_state
from .resources import comparison_table, grade_school_resources, karatsuba_resources
from .reversible import build_grade_school, build_karatsuba, multiply_reversible

__version__ = "0.1.0"
