"""
A tour of the simulator: gates, postselection, sampling, and the
reversible backend.

Run:  python walkthroughs/02_statevector_engine.py
"""
import numpy as np

from qconvmul import engine
from qconvmul.engine import Circuit, Gate

# Bell pair. Qubit 0 is the least significant bit of the basis index.
bell = Circuit(2).add(Gate.H, 0).add(Gate.CNOT, 0, 1)
state = engine.apply_circuit(engine.zero_state(2), bell)
print("Bell amplitudes:", np.round(state.amplitudes, 4))

# Keep only the branch where qubit 1 reads 0; its weight is recorded.
kept, p = engine.postselect_zero(state, [1])
print("postselected on q1=0:", np.round(kept.amplitudes, 4), "p =", p)

# Seeded sampling. Bitstrings in the histogram are most-significant-first.
hist = engine.sample(state, 10_000, seed=1)
print("histogram:", hist.to_dict())

# Two controlled-sqrt(X) gates make a CNOT.
cv2 = Circuit(2).add(Gate.CV, 0, 1).add(Gate.CV, 0, 1)
print("CV.CV == CNOT:", np.allclose(engine.circuit_unitary(cv2),
                                    engine.circuit_unitary(Circuit(2).add(Gate.CNOT, 0, 1))))

# Permutation circuits also run on plain integers, at any width.
toff = Circuit(3).add(Gate.TOFFOLI, 0, 1, 2)
print("Toffoli on 0b011 ->", bin(engine.run_reversible(toff, 0b011)))
