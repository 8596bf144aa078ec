"""
Reversible multiplier circuits built from ANDing, full-adder and
full-subtractor blocks.

Every Toffoli inside a block is realized with the controlled-V pattern
(V = sqrt(X)):

    CV(b -> t) . CNOT(a -> b) . CV^dagger(b -> t) . CNOT(a -> b) . CV(a -> t)

so each block is a permutation only as a whole. The blocks are verified
once on all basis inputs (see ``engine.BlockDef``), after which circuits
far too wide for dense simulation run on the reversible backend.

Block semantics (wires in placement order):

    QAC  (a, c, q)        -> (a, c, q ^ (a & c))
    QFA  (a, b, c, d)     -> (a, b, a ^ b ^ c, d ^ maj(a, b, c))
    QFS  (a, b, c, d)     -> (a, b, a ^ b ^ c, d ^ borrow(a - b - c))

with borrow(a - b - c) = (~a & b) | (~(a ^ b) & c). Adders and subtractors
leave both operands intact and overwrite the carry-in wire with the result
bit, so a sum or difference ends up on the chain of carry wires.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .classical import is_power_of_two
from .engine import BlockDef, BlockOp, Circuit, Gate, GateOp, read_register, run_reversible, write_register


class Primitive(str, Enum):
    QAC = "QAC"
    QFA = "QFA"
    QFS = "QFS"
    FINAL_ADDING = "FinalAdding"


def _toffoli_cv(a: int, b: int, t: int) -> list[GateOp]:
    return [
        GateOp(Gate.CV, (b, t)),
        GateOp(Gate.CNOT, (a, b)),
        GateOp(Gate.CVDG, (b, t)),
        GateOp(Gate.CNOT, (a, b)),
        GateOp(Gate.CV, (a, t)),
    ]


@lru_cache(maxsize=None)
def block(kind: Primitive) -> BlockDef:
    """The verified single-bit block for ``kind`` (QAC, QFA or QFS)."""
    kind = Primitive(kind)
    if kind is Primitive.QAC:
        return BlockDef("QAC", 3, _toffoli_cv(0, 1, 2))
    if kind is Primitive.QFA:
        body = [
            *_toffoli_cv(0, 1, 3),
            GateOp(Gate.CNOT, (0, 1)),
            *_toffoli_cv(1, 2, 3),
            GateOp(Gate.CNOT, (1, 2)),
            GateOp(Gate.CNOT, (0, 1)),
        ]
        return BlockDef("QFA", 4, body)
    if kind is Primitive.QFS:
        body = [
            GateOp(Gate.X, (0,)),
            *_toffoli_cv(0, 1, 3),
            GateOp(Gate.X, (0,)),
            GateOp(Gate.CNOT, (0, 1)),
            GateOp(Gate.X, (1,)),
            *_toffoli_cv(1, 2, 3),
            GateOp(Gate.X, (1,)),
            GateOp(Gate.CNOT, (1, 2)),
            GateOp(Gate.CNOT, (0, 1)),
        ]
        return BlockDef("QFS", 4, body)
    raise ValueError(f"{kind.value} is not a single-bit block")


class _Builder:
    """Allocates wires and appends blocks; tracks wires known to end at 0."""

    def __init__(self):
        self.width = 0
        self.ops: list[BlockOp | GateOp] = []
        self.clean: list[int] = []
        self._zero: int | None = None

    def alloc(self, k: int = 1) -> list[int]:
        wires = list(range(self.width, self.width + k))
        self.width += k
        return wires

    def zero(self) -> int:
        # adders and subtractors never modify their operands, so one
        # constant-zero wire can pad every operand in the circuit
        if self._zero is None:
            self._zero = self.alloc()[0]
            self.clean.append(self._zero)
        return self._zero

    def qac(self, a: int, c: int) -> int:
        (q,) = self.alloc()
        self.ops.append(BlockOp(block(Primitive.QAC), (a, c, q)))
        return q

    def _pad(self, xs: list[int], ys: list[int]) -> tuple[list[int], list[int]]:
        w = max(len(xs), len(ys))
        return xs + [self.zero()] * (w - len(xs)), ys + [self.zero()] * (w - len(ys))

    def add(self, xs: list[int], ys: list[int], carry_in: int | None = None) -> list[int]:
        """Ripple sum of two registers; returns max(len) + 1 result wires."""
        xs, ys = self._pad(list(xs), list(ys))
        carry = self.alloc()[0] if carry_in is None else carry_in
        out = []
        for x, y in zip(xs, ys):
            (d,) = self.alloc()
            self.ops.append(BlockOp(block(Primitive.QFA), (x, y, carry, d)))
            out.append(carry)
            carry = d
        return out + [carry]

    def sub(self, xs: list[int], ys: list[int], borrow_in: int | None = None) -> tuple[list[int], int]:
        """Ripple difference xs - ys; returns (difference wires, borrow-out wire)."""
        xs, ys = self._pad(list(xs), list(ys))
        borrow = self.alloc()[0] if borrow_in is None else borrow_in
        out = []
        for x, y in zip(xs, ys):
            (d,) = self.alloc()
            self.ops.append(BlockOp(block(Primitive.QFS), (x, y, borrow, d)))
            out.append(borrow)
            borrow = d
        return out, borrow

    def grade_school(self, xs: list[int], ys: list[int]) -> list[int]:
        # partial product generation: one QAC per bit pair
        rows = [[self.qac(x, y) for x in xs] for y in ys]
        # partial product addition: ripple each shifted row into the accumulator
        acc = rows[0]
        for j, row in enumerate(rows[1:], start=1):
            acc = acc[:j] + self.add(acc[j:], row)
        return acc + [self.zero()] * (len(xs) + len(ys) - len(acc))

    def final_adding(self, u: list[int], z: list[int], v: list[int], h: int) -> list[int]:
        """P = 2**(2h) U + 2**h Z + V; U and V never overlap, so only Z needs adding."""
        t = v + u
        return t[:h] + self.add(t[h:], z)

    def karatsuba(self, xs: list[int], ys: list[int]) -> list[int]:
        m = len(xs)
        if m <= 4:
            return self.grade_school(xs, ys)
        h = m // 2
        x2, x1 = xs[:h], xs[h:]
        y2, y1 = ys[:h], ys[h:]
        u = self.karatsuba(x1, y1)
        v = self.karatsuba(x2, y2)
        # X1 + X2 needs one more bit than either half; the W multiplier is widened
        w = self.karatsuba(self.add(x1, x2), self.add(y1, y2))
        z, borrow = self.sub(w, self.add(u, v))
        self.clean.append(borrow)  # W >= U + V
        p = self.final_adding(u, z, v, h)
        self.clean.extend(p[2 * m:])  # P < 2**(2m)
        return p[:2 * m]

    def circuit(self, registers: dict[str, list[int]], uncomputed: bool = False) -> Circuit:
        c = Circuit(max(self.width, 1), self.ops)
        named = {q for qs in registers.values() for q in qs}
        for name, qs in registers.items():
            c.add_register(name, qs)
        rest = [q for q in range(self.width) if q not in named]
        clean = set(self.clean) - named
        if uncomputed:
            clean = set(rest)
        c.add_register("ancilla_clean", sorted(clean))
        c.add_register("garbage", [q for q in rest if q not in clean])
        c.validate_layout()
        return c


def build_primitive(kind: Primitive, n: int = 1) -> Circuit:
    """
    Stand-alone circuit for one primitive.

    QAC: registers a, c, q (q receives a AND c).
    QFA^[n] / QFS^[n]: n-bit ripple chains over registers a, b, a one-qubit
    carry/borrow-in c and n fresh ancillas d. Results are listed in
    ``circuit.outputs``: "sum" (n + 1 bits) for QFA, "difference" (n bits)
    and "borrow" for QFS.
    FinalAdding^[n]: registers u (n), z (n + 1), v (n); output "p" holds
    2**n U + 2**(n/2) Z + V (2n + 1 bits, so no input can overflow it).
    """
    kind = Primitive(kind)
    b = _Builder()
    if kind is Primitive.QAC:
        if n != 1:
            raise ValueError("QAC is a single-bit block")
        a, cc = b.alloc(), b.alloc()
        q = b.qac(a[0], cc[0])
        circ = b.circuit({"a": a, "c": cc, "q": [q]})
        circ.outputs = {"q": (q,)}
        return circ
    if n < 1:
        raise ValueError("width must be at least 1")
    if kind in (Primitive.QFA, Primitive.QFS):
        xa, xb, cin = b.alloc(n), b.alloc(n), b.alloc()
        if kind is Primitive.QFA:
            out = b.add(xa, xb, carry_in=cin[0])
            d = out[1:]
            circ = b.circuit({"a": xa, "b": xb, "c": cin, "d": d})
            circ.outputs = {"sum": tuple(out)}
        else:
            diff, borrow = b.sub(xa, xb, borrow_in=cin[0])
            d = diff[1:] + [borrow]
            circ = b.circuit({"a": xa, "b": xb, "c": cin, "d": d})
            circ.outputs = {"difference": tuple(diff), "borrow": (borrow,)}
        return circ
    if not (is_power_of_two(n) and n >= 2):
        raise ValueError("FinalAdding needs an even power-of-two width")
    u, z, v = b.alloc(n), b.alloc(n + 1), b.alloc(n)
    p = b.final_adding(u, z, v, n // 2)
    circ = b.circuit({"u": u, "z": z, "v": v})
    circ.outputs = {"p": tuple(p)}
    return circ


@dataclass(frozen=True)
class MultiplierCircuit:
    circuit: Circuit
    n: int
    x_register: tuple[int, ...]
    y_register: tuple[int, ...]
    product_register: tuple[int, ...]
    algorithm: str


def _finish(b: _Builder, xs, ys, prod, n: int, algorithm: str, uncompute: bool) -> MultiplierCircuit:
    if uncompute:
        # Bennett: copy the product out, then run the computation backwards
        compute = list(b.ops)
        out = b.alloc(len(prod))
        b.ops.extend(GateOp(Gate.CNOT, (p, o)) for p, o in zip(prod, out))
        b.ops.extend(op.inverse() for op in reversed(compute))
        prod = out
    circ = b.circuit({"x": xs, "y": ys, "product": prod}, uncomputed=uncompute)
    return MultiplierCircuit(circ, n, tuple(xs), tuple(ys), tuple(prod), algorithm)


def build_grade_school(n: int, uncompute: bool = False) -> MultiplierCircuit:
    """n x n-bit grade-school multiplier: n**2 QAC blocks then ripple PPA."""
    if n < 1:
        raise ValueError("bit width must be at least 1")
    b = _Builder()
    xs, ys = b.alloc(n), b.alloc(n)
    prod = b.grade_school(xs, ys)
    return _finish(b, xs, ys, prod, n, "grade-school", uncompute)


def build_karatsuba(n: int, uncompute: bool = False) -> MultiplierCircuit:
    """Recursive Karatsuba multiplier with the grade-school circuit as its n <= 4 base."""
    if not is_power_of_two(n) or n < 4:
        raise ValueError(f"Karatsuba width must be a power of two >= 4, got {n}")
    b = _Builder()
    xs, ys = b.alloc(n), b.alloc(n)
    prod = b.karatsuba(xs, ys)
    return _finish(b, xs, ys, prod, n, "karatsuba", uncompute)


def multiply_reversible(mc: MultiplierCircuit, x: int, y: int) -> int:
    if not (0 <= x < 1 << mc.n and 0 <= y < 1 << mc.n):
        raise ValueError(f"operands must lie in [0, 2**{mc.n})")
    state = write_register(0, mc.x_register, x)
    state = write_register(state, mc.y_register, y)
    return read_register(run_reversible(mc.circuit, state), mc.product_register)
