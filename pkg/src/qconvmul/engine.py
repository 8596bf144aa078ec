"""
Dense statevector simulator plus a classical backend for reversible circuits.

Conventions
-----------
Qubit i is bit i of the basis index (little-endian). A gate matrix acting
on ``op.qubits = (q0, q1, ...)`` is indexed the same way: q0 is bit 0 of the
matrix row/column index. Bitstrings rendered for people (histogram JSON
and CSV) are most-significant-first, the way kets are usually written.

Circuits hold a flat list of operations, each either a single ``GateOp`` or
a ``BlockOp``. A block is a small named sub-circuit (at most a handful of
qubits) that is dense-simulated once on every basis input when defined.
If that shows it to be a permutation, the reversible backend can run it
with a table lookup even though its gates (controlled-V and friends) are
not permutations one at a time.
"""
from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import (
    ImpossibleBranchError,
    InsufficientShotsError,
    MemoryCapError,
    NotClassicalError,
)

DEFAULT_MEMORY_CAP = 2**26
MEMORY_CAP_ENV = "QCONVMUL_MEMORY_CAP"
_memory_cap_override: int | None = None


def memory_cap() -> int:
    """Largest number of amplitudes a dense state may hold."""
    if _memory_cap_override is not None:
        return _memory_cap_override
    env = os.environ.get(MEMORY_CAP_ENV)
    if env:
        return int(env, 0)
    return DEFAULT_MEMORY_CAP


def set_memory_cap(cap: int | None) -> None:
    """Override the amplitude budget; ``None`` restores the default/env value."""
    global _memory_cap_override
    if cap is not None and cap < 2:
        raise ValueError("memory cap must allow at least one qubit")
    _memory_cap_override = cap


def check_width(num_qubits: int) -> None:
    if num_qubits < 1:
        raise ValueError("a state needs at least one qubit")
    if 2**num_qubits > memory_cap():
        raise MemoryCapError(
            f"{num_qubits} qubits need 2**{num_qubits} amplitudes, cap is {memory_cap()}"
        )


# --------------------------------------------------------------------------
# gates

class Gate(str, Enum):
    X = "X"
    H = "H"
    Z = "Z"
    CNOT = "CNOT"
    TOFFOLI = "TOFFOLI"
    CV = "CV"
    CVDG = "CVDG"
    CPHASE = "CPHASE"
    CPHASEDG = "CPHASEDG"
    SWAP = "SWAP"
    MCZ = "MCZ"
    UNITARY = "UNITARY"


_ARITY = {
    Gate.X: 1, Gate.H: 1, Gate.Z: 1,
    Gate.CNOT: 2, Gate.CV: 2, Gate.CVDG: 2, Gate.CPHASE: 2, Gate.CPHASEDG: 2,
    Gate.SWAP: 2, Gate.TOFFOLI: 3,
}
_PERMUTATION_GATES = {Gate.X, Gate.CNOT, Gate.TOFFOLI, Gate.SWAP}
_DIAGONAL_GATES = {Gate.Z, Gate.CPHASE, Gate.CPHASEDG, Gate.MCZ}
_SELF_INVERSE = {Gate.X, Gate.H, Gate.Z, Gate.CNOT, Gate.TOFFOLI, Gate.SWAP, Gate.MCZ}
_DAGGER = {Gate.CV: Gate.CVDG, Gate.CVDG: Gate.CV,
           Gate.CPHASE: Gate.CPHASEDG, Gate.CPHASEDG: Gate.CPHASE}

_SQRT_X = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class GateOp:
    """
    One gate. Controls come first in ``qubits`` and the target last.

    CPHASE with level k multiplies |11> by exp(2*pi*i / 2**k); CPHASEDG is
    its conjugate. MCZ flips the sign of the state where every listed qubit
    is 1. UNITARY carries an explicit matrix.
    """

    kind: Gate
    qubits: tuple[int, ...]
    k: int | None = None
    matrix: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", Gate(self.kind))
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        qs = self.qubits
        if len(set(qs)) != len(qs):
            raise ValueError(f"{self.kind.value}: repeated qubit in {qs}")
        if any(q < 0 for q in qs):
            raise ValueError(f"{self.kind.value}: negative qubit index")
        arity = _ARITY.get(self.kind)
        if arity is not None and len(qs) != arity:
            raise ValueError(f"{self.kind.value} acts on {arity} qubits, got {len(qs)}")
        if self.kind in (Gate.CPHASE, Gate.CPHASEDG) and self.k is None:
            raise ValueError("controlled phase needs a level k")
        if self.kind in (Gate.MCZ, Gate.UNITARY) and not qs:
            raise ValueError(f"{self.kind.value} needs at least one qubit")
        if self.kind is Gate.UNITARY:
            m = np.asarray(self.matrix, dtype=complex)
            if m.shape != (2 ** len(qs),) * 2:
                raise ValueError(f"matrix shape {m.shape} does not fit {len(qs)} qubits")
            object.__setattr__(self, "matrix", m)

    @property
    def is_permutation(self) -> bool:
        return self.kind in _PERMUTATION_GATES

    def inverse(self) -> "GateOp":
        if self.kind in _SELF_INVERSE:
            return self
        if self.kind is Gate.UNITARY:
            return GateOp(Gate.UNITARY, self.qubits, matrix=self.matrix.conj().T)
        return GateOp(_DAGGER[self.kind], self.qubits, self.k)

    def remap(self, mapping: Sequence[int]) -> "GateOp":
        return GateOp(self.kind, tuple(mapping[q] for q in self.qubits), self.k, self.matrix)


def _controlled(u: np.ndarray, n_controls: int) -> np.ndarray:
    dim = 2 ** (n_controls + 1)
    m = np.eye(dim, dtype=complex)
    i0 = 2**n_controls - 1
    i1 = i0 + 2**n_controls
    m[np.ix_([i0, i1], [i0, i1])] = u
    return m


def gate_matrix(op: GateOp) -> np.ndarray:
    """Matrix of ``op`` in the little-endian order of ``op.qubits``."""
    kind = op.kind
    if kind is Gate.X:
        return _X.copy()
    if kind is Gate.H:
        return _H.copy()
    if kind is Gate.Z:
        return np.diag([1, -1]).astype(complex)
    if kind is Gate.CNOT:
        return _controlled(_X, 1)
    if kind is Gate.TOFFOLI:
        return _controlled(_X, 2)
    if kind is Gate.CV:
        return _controlled(_SQRT_X, 1)
    if kind is Gate.CVDG:
        return _controlled(_SQRT_X.conj().T, 1)
    if kind in (Gate.CPHASE, Gate.CPHASEDG):
        sign = 1 if kind is Gate.CPHASE else -1
        return np.diag([1, 1, 1, np.exp(sign * 2j * np.pi / 2**op.k)])
    if kind is Gate.SWAP:
        return np.eye(4, dtype=complex)[[0, 2, 1, 3]]
    if kind is Gate.MCZ:
        d = np.ones(2 ** len(op.qubits), dtype=complex)
        d[-1] = -1
        return np.diag(d)
    if kind is Gate.UNITARY:
        return op.matrix.copy()
    raise AssertionError(kind)


@lru_cache(maxsize=512)
def _ones_mask(num_qubits: int, qubits: tuple[int, ...]) -> np.ndarray:
    idx = np.arange(2**num_qubits)
    mask = np.ones(idx.shape, dtype=bool)
    for q in qubits:
        mask &= ((idx >> q) & 1).astype(bool)
    mask.flags.writeable = False
    return mask


@lru_cache(maxsize=512)
def _zeros_mask(num_qubits: int, qubits: tuple[int, ...]) -> np.ndarray:
    idx = np.arange(2**num_qubits)
    bits = 0
    for q in qubits:
        bits |= 1 << q
    mask = (idx & bits) == 0
    mask.flags.writeable = False
    return mask


def _apply_dense(arr: np.ndarray, mat: np.ndarray, qubits: Sequence[int], q: int) -> np.ndarray:
    m = len(qubits)
    t = arr.reshape((2,) * q + (-1,))
    axes = [q - 1 - qubits[m - 1 - j] for j in range(m)]
    out = np.tensordot(mat.reshape((2,) * (2 * m)), t, axes=(list(range(m, 2 * m)), axes))
    out = np.moveaxis(out, list(range(m)), axes)
    return out.reshape(arr.shape)


_SINGLE_TARGET = {
    Gate.X: (0, _X), Gate.H: (0, _H),
    Gate.CNOT: (1, _X), Gate.TOFFOLI: (2, _X),
    Gate.CV: (1, _SQRT_X), Gate.CVDG: (1, _SQRT_X.conj().T),
}


def _apply_controlled(arr: np.ndarray, u: np.ndarray, controls, target: int, q: int) -> np.ndarray:
    t = arr.reshape((2,) * q + (-1,))
    sl = [slice(None)] * (q + 1)
    for c in controls:
        sl[q - 1 - c] = 1
    ax = q - 1 - target
    sl[ax] = 0
    i0 = tuple(sl)
    sl[ax] = 1
    i1 = tuple(sl)
    a0, a1 = t[i0].copy(), t[i1].copy()
    t[i0] = u[0, 0] * a0 + u[0, 1] * a1
    t[i1] = u[1, 0] * a0 + u[1, 1] * a1
    return arr


def _apply_swap(arr: np.ndarray, a: int, b: int, q: int) -> np.ndarray:
    t = arr.reshape((2,) * q + (-1,))
    sl = [slice(None)] * (q + 1)
    sl[q - 1 - a], sl[q - 1 - b] = 0, 1
    i01 = tuple(sl)
    sl[q - 1 - a], sl[q - 1 - b] = 1, 0
    i10 = tuple(sl)
    tmp = t[i01].copy()
    t[i01] = t[i10]
    t[i10] = tmp
    return arr


def _apply_gate(arr: np.ndarray, op: GateOp, q: int) -> np.ndarray:
    """
    Apply one gate to a C-contiguous array of shape (2**q,) or (2**q, batch).

    The array is updated in place where possible; use the return value.
    """
    kind = op.kind
    if kind in _DIAGONAL_GATES:
        mask = _ones_mask(q, op.qubits)
        if kind in (Gate.Z, Gate.MCZ):
            arr[mask] *= -1
        else:
            sign = 1 if kind is Gate.CPHASE else -1
            arr[mask] *= np.exp(sign * 2j * np.pi / 2**op.k)
        return arr
    if kind in _SINGLE_TARGET:
        n_controls, u = _SINGLE_TARGET[kind]
        return _apply_controlled(arr, u, op.qubits[:n_controls], op.qubits[-1], q)
    if kind is Gate.SWAP:
        return _apply_swap(arr, *op.qubits, q)
    return np.ascontiguousarray(_apply_dense(arr, gate_matrix(op), op.qubits, q))


def gates_on_batch(circuit: "Circuit", columns: np.ndarray) -> np.ndarray:
    """Apply ``circuit`` to every column of a (2**q, batch) array."""
    arr = np.array(columns, dtype=complex, order="C")
    if arr.shape[0] != 2**circuit.num_qubits:
        raise ValueError("column length does not match the circuit width")
    for op in circuit.gates():
        arr = _apply_gate(arr, op, circuit.num_qubits)
    return arr


# --------------------------------------------------------------------------
# blocks

class BlockDef:
    """
    A named sub-circuit on ``width`` local qubits.

    On construction every basis input is dense-simulated; ``table[i]`` is
    the output basis index for input ``i`` when the block is a permutation
    (``table`` is None otherwise).
    """

    def __init__(self, name: str, width: int, body: Iterable[GateOp]):
        self.name = name
        self.width = width
        self.body = tuple(body)
        for op in self.body:
            if max(op.qubits) >= width:
                raise ValueError(f"block {name}: qubit {max(op.qubits)} outside width {width}")
        self.table = self._verify()
        self._inverse: BlockDef | None = None

    def _verify(self) -> tuple[int, ...] | None:
        dim = 2**self.width
        u = np.eye(dim, dtype=complex)
        for op in self.body:
            u = _apply_gate(u, op, self.width)
        table = np.argmax(np.abs(u), axis=0)
        perm = np.zeros_like(u)
        perm[table, np.arange(dim)] = 1.0
        if np.max(np.abs(u - perm)) > 1e-10 or len(set(table.tolist())) != dim:
            return None
        return tuple(int(t) for t in table)

    @property
    def is_permutation(self) -> bool:
        return self.table is not None

    def inverse(self) -> "BlockDef":
        if self._inverse is None:
            inv = BlockDef(self.name + "_dg", self.width, [op.inverse() for op in reversed(self.body)])
            inv._inverse = self
            self._inverse = inv
        return self._inverse

    def __repr__(self):
        return f"BlockDef({self.name!r}, width={self.width}, gates={len(self.body)})"


@dataclass(frozen=True)
class BlockOp:
    definition: BlockDef
    qubits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(self.qubits) != self.definition.width:
            raise ValueError(f"block {self.definition.name} needs {self.definition.width} qubits")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("repeated qubit in block placement")

    @property
    def is_permutation(self) -> bool:
        return self.definition.is_permutation

    def inverse(self) -> "BlockOp":
        return BlockOp(self.definition.inverse(), self.qubits)

    def remap(self, mapping: Sequence[int]) -> "BlockOp":
        return BlockOp(self.definition, tuple(mapping[q] for q in self.qubits))

    def gates(self) -> Iterator[GateOp]:
        for op in self.definition.body:
            yield op.remap(self.qubits)


Operation = Union[GateOp, BlockOp]


# --------------------------------------------------------------------------
# circuits

class Circuit:
    """
    Ordered operations on ``num_qubits`` qubits with named registers.

    ``layout`` maps register names to tuples of qubit indices, least
    significant first. Registers are disjoint; ``validate_layout`` checks
    that they also cover every qubit.
    """

    def __init__(self, num_qubits: int, ops: Iterable[Operation] = (),
                 layout: dict[str, Sequence[int]] | None = None):
        if num_qubits < 1:
            raise ValueError("a circuit needs at least one qubit")
        self.num_qubits = num_qubits
        self.ops: list[Operation] = []
        self.layout: dict[str, tuple[int, ...]] = {}
        self.outputs: dict[str, tuple[int, ...]] = {}
        self._compiled = None
        self.extend(ops)
        for name, qs in (layout or {}).items():
            self.add_register(name, qs)

    # construction -------------------------------------------------------
    def append(self, op: Operation) -> "Circuit":
        if max(op.qubits) >= self.num_qubits:
            raise ValueError(f"qubit {max(op.qubits)} outside a {self.num_qubits}-qubit circuit")
        self.ops.append(op)
        self._compiled = None
        return self

    def extend(self, ops: Iterable[Operation]) -> "Circuit":
        for op in ops:
            self.append(op)
        return self

    def add(self, kind, *qubits: int, k: int | None = None, matrix=None) -> "Circuit":
        return self.append(GateOp(Gate(kind), qubits, k, matrix))

    def compose(self, other: "Circuit", qubits: Sequence[int] | None = None) -> "Circuit":
        """Append ``other`` with its qubit i placed on ``qubits[i]``."""
        mapping = list(range(other.num_qubits)) if qubits is None else list(qubits)
        if len(mapping) != other.num_qubits:
            raise ValueError("qubit mapping must cover every qubit of the appended circuit")
        for op in other.ops:
            self.append(op.remap(mapping))
        return self

    def add_register(self, name: str, qubits: Sequence[int]) -> None:
        qs = tuple(int(q) for q in qubits)
        if any(not 0 <= q < self.num_qubits for q in qs):
            raise ValueError(f"register {name} reaches outside the circuit")
        taken = {q for other, rq in self.layout.items() if other != name for q in rq}
        if taken & set(qs):
            raise ValueError(f"register {name} overlaps an existing register")
        self.layout[name] = qs

    def validate_layout(self) -> None:
        covered = sorted(q for qs in self.layout.values() for q in qs)
        if covered != list(range(self.num_qubits)):
            raise ValueError("layout registers do not cover the circuit exactly once")

    def copy(self) -> "Circuit":
        c = Circuit(self.num_qubits, self.ops, self.layout)
        c.outputs = dict(self.outputs)
        return c

    def inverse(self) -> "Circuit":
        """Adjoint circuit; ``outputs`` are dropped since they describe the forward map."""
        return Circuit(self.num_qubits, [op.inverse() for op in reversed(self.ops)], self.layout)

    # inspection ---------------------------------------------------------
    @property
    def classical(self) -> bool:
        """True when every operation maps basis states to basis states."""
        return all(op.is_permutation for op in self.ops)

    def gates(self) -> Iterator[GateOp]:
        """All gates with blocks expanded."""
        for op in self.ops:
            if isinstance(op, BlockOp):
                yield from op.gates()
            else:
                yield op

    def gate_count(self) -> int:
        return sum(1 for _ in self.gates())

    def depth(self) -> int:
        """ASAP layer count over the expanded gates."""
        level = [0] * self.num_qubits
        for op in self.gates():
            d = max(level[q] for q in op.qubits) + 1
            for q in op.qubits:
                level[q] = d
        return max(level, default=0)

    def count_ops(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for op in self.gates():
            counts[op.kind.value] = counts.get(op.kind.value, 0) + 1
        return counts

    def to_netlist(self) -> str:
        """One gate per line: kind then qubit indices; blocks get a header comment."""
        lines = [f"# qubits {self.num_qubits}"]
        for name, qs in self.layout.items():
            lines.append(f"# register {name} " + " ".join(map(str, qs)))

        def fmt(op: GateOp) -> str:
            s = " ".join([op.kind.value, *map(str, op.qubits)])
            if op.k is not None:
                s += f" k={op.k}"
            return s

        for op in self.ops:
            if isinstance(op, BlockOp):
                lines.append(f"# block {op.definition.name} " + " ".join(map(str, op.qubits)))
                lines.extend(fmt(g) for g in op.gates())
            else:
                lines.append(fmt(op))
        return "\n".join(lines) + "\n"

    def __len__(self):
        return len(self.ops)

    def __repr__(self):
        return f"Circuit(num_qubits={self.num_qubits}, ops={len(self.ops)})"


# --------------------------------------------------------------------------
# states

@dataclass
class Statevector:
    """
    Amplitudes over ``num_qubits`` qubits.

    ``branch_probability`` is 1 for a freshly prepared state. After
    postselection the amplitudes are renormalized and the probability of
    the kept branch is recorded here (cumulatively), so it is never lost.
    """

    amplitudes: np.ndarray
    branch_probability: float = 1.0

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        n = self.amplitudes.size
        if self.amplitudes.ndim != 1 or n < 2 or n & (n - 1):
            raise ValueError("amplitude array length must be a power of two >= 2")

    @property
    def num_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "Statevector":
        return Statevector(self.amplitudes.copy(), self.branch_probability)


def zero_state(num_qubits: int) -> Statevector:
    check_width(num_qubits)
    amps = np.zeros(2**num_qubits, dtype=complex)
    amps[0] = 1.0
    return Statevector(amps)


def basis_state(num_qubits: int, index: int) -> Statevector:
    state = zero_state(num_qubits)
    if not 0 <= index < 2**num_qubits:
        raise ValueError(f"basis index {index} out of range")
    state.amplitudes[0] = 0.0
    state.amplitudes[index] = 1.0
    return state


def apply_circuit(state: Statevector, circuit: Circuit) -> Statevector:
    if circuit.num_qubits != state.num_qubits:
        raise ValueError(
            f"circuit has {circuit.num_qubits} qubits, state has {state.num_qubits}"
        )
    arr = np.array(state.amplitudes, dtype=complex, order="C")
    for op in circuit.gates():
        arr = _apply_gate(arr, op, circuit.num_qubits)
    return Statevector(arr, state.branch_probability)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Full matrix of a (small) circuit; column i is the image of |i>."""
    check_width(2 * circuit.num_qubits)
    return gates_on_batch(circuit, np.eye(2**circuit.num_qubits))


def phase_flip_zero(state: Statevector, qubits: Sequence[int]) -> Statevector:
    """Negate every amplitude whose ``qubits`` all read 0 (the reflection 1 - 2P)."""
    arr = state.amplitudes.copy()
    arr[_zeros_mask(state.num_qubits, tuple(qubits))] *= -1
    return Statevector(arr, state.branch_probability)


def zero_branch_probability(state: Statevector, qubits: Sequence[int]) -> float:
    mask = _zeros_mask(state.num_qubits, tuple(qubits))
    return float(np.sum(state.probabilities[mask]))


def postselect_zero(state: Statevector, qubits: Sequence[int]) -> tuple[Statevector, float]:
    """
    Keep the branch where every qubit in ``qubits`` is 0.

    Returns the renormalized state (same qubit count) and the branch
    probability.
    """
    qubits = tuple(qubits)
    if any(not 0 <= q < state.num_qubits for q in qubits):
        raise ValueError("postselected qubits must lie inside the state")
    mask = _zeros_mask(state.num_qubits, qubits)
    p = float(np.sum(state.probabilities[mask]))
    if p < 1e-14:
        raise ImpossibleBranchError(f"branch probability {p:.3g} is numerically zero")
    arr = np.where(mask, state.amplitudes, 0) / np.sqrt(p)
    return Statevector(arr, state.branch_probability * p), p


# --------------------------------------------------------------------------
# sampling

@dataclass
class Histogram:
    """Measurement counts keyed by basis index (little-endian over its qubits)."""

    counts: dict[int, int]
    shots: int
    num_qubits: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts do not add up to shots")

    def bitstring(self, index: int) -> str:
        """Most-significant-first rendering, as in ket notation."""
        return format(index, f"0{self.num_qubits}b")

    def frequency(self, index: int) -> float:
        return self.counts.get(index, 0) / self.shots if self.shots else 0.0

    def marginal(self, qubits: Sequence[int]) -> "Histogram":
        out: dict[int, int] = {}
        for idx, c in self.counts.items():
            sub = 0
            for i, q in enumerate(qubits):
                sub |= ((idx >> q) & 1) << i
            out[sub] = out.get(sub, 0) + c
        return Histogram(dict(sorted(out.items())), self.shots, len(qubits))

    def conditioned_on_zero(self, keep: Sequence[int], zero: Sequence[int]) -> "Histogram":
        """Marginal over ``keep`` restricted to shots where ``zero`` read all 0."""
        zmask = 0
        for q in zero:
            zmask |= 1 << q
        kept = {i: c for i, c in self.counts.items() if not i & zmask}
        return Histogram(kept, sum(kept.values()), self.num_qubits).marginal(keep)

    def to_dict(self) -> dict[str, int]:
        return {self.bitstring(i): c for i, c in sorted(self.counts.items())}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bitstring", "count"])
        for i, c in sorted(self.counts.items()):
            w.writerow([self.bitstring(i), c])
        return buf.getvalue()


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator; the stream is fixed by the seed on every platform."""
    return np.random.Generator(np.random.PCG64(seed))


def sample(state: Statevector, shots: int, seed=None) -> Histogram:
    """Draw ``shots`` i.i.d. basis outcomes from |amplitude|**2."""
    if shots < 1:
        raise InsufficientShotsError("shots must be at least 1")
    probs = state.probabilities
    total = probs.sum()
    if abs(total - 1.0) > 1e-8:
        raise ValueError(f"state is not normalized (norm**2 = {total:.12g})")
    counts = make_rng(seed).multinomial(shots, probs / total)
    nz = np.flatnonzero(counts)
    return Histogram({int(i): int(counts[i]) for i in nz}, shots, state.num_qubits)


# --------------------------------------------------------------------------
# reversible backend

def _compile(circuit: Circuit):
    steps = []
    for op in circuit.ops:
        if isinstance(op, BlockOp):
            steps.append(("B", op.qubits, op.definition.table))
        elif op.kind is Gate.X:
            steps.append(("X", 1 << op.qubits[0]))
        elif op.kind is Gate.CNOT:
            c, t = op.qubits
            steps.append(("C", 1 << c, 1 << t))
        elif op.kind is Gate.TOFFOLI:
            a, b, t = op.qubits
            steps.append(("C", (1 << a) | (1 << b), 1 << t))
        elif op.kind is Gate.SWAP:
            steps.append(("S", *op.qubits))
    return steps


def run_reversible(circuit: Circuit, input_bits: int) -> int:
    """Output basis index of a permutation circuit on basis input ``input_bits``."""
    if not circuit.classical:
        raise NotClassicalError("circuit contains gates that are not basis permutations")
    if not 0 <= input_bits < 1 << circuit.num_qubits:
        raise ValueError("input does not fit the circuit width")
    if circuit._compiled is None:
        circuit._compiled = _compile(circuit)
    s = input_bits
    for step in circuit._compiled:
        tag = step[0]
        if tag == "C":
            if s & step[1] == step[1]:
                s ^= step[2]
        elif tag == "B":
            qs, table = step[1], step[2]
            local = 0
            for i, q in enumerate(qs):
                local |= ((s >> q) & 1) << i
            out = table[local]
            for i, q in enumerate(qs):
                s = (s & ~(1 << q)) | (((out >> i) & 1) << q)
        elif tag == "X":
            s ^= step[1]
        else:
            a, b = step[1], step[2]
            if ((s >> a) ^ (s >> b)) & 1:
                s ^= (1 << a) | (1 << b)
    return s


def read_register(index: int, qubits: Sequence[int]) -> int:
    value = 0
    for i, q in enumerate(qubits):
        value |= ((index >> q) & 1) << i
    return value


def write_register(index: int, qubits: Sequence[int], value: int) -> int:
    if value >> len(qubits):
        raise ValueError(f"{value} does not fit a {len(qubits)}-qubit register")
    for i, q in enumerate(qubits):
        index = (index & ~(1 << q)) | (((value >> i) & 1) << q)
    return index
