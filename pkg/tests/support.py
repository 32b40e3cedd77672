"""Shared helpers: an independent Kronecker-product simulator and circuit generators."""

from __future__ import annotations

import math
from functools import reduce

import numpy as np
from hypothesis import strategies as st

from laqe.circuit import Circuit, Gate, GateKind, cx, h, rz, x
from laqe.random_circuits import RandomCircuitSpec, generate_random_circuit

KINDS_1Q = [k for k in GateKind if k.arity == 1]

_I2 = np.eye(2, dtype=complex)
_P0 = np.diag([1, 0]).astype(complex)
_P1 = np.diag([0, 1]).astype(complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)


def _one_qubit_matrix(g: Gate) -> np.ndarray:
    r = 1 / math.sqrt(2)
    w = complex(math.cos(math.pi / 4), math.sin(math.pi / 4))
    table = {
        GateKind.H: [[r, r], [r, -r]],
        GateKind.X: [[0, 1], [1, 0]],
        GateKind.Z: [[1, 0], [0, -1]],
        GateKind.S: [[1, 0], [0, 1j]],
        GateKind.SDG: [[1, 0], [0, -1j]],
        GateKind.T: [[1, 0], [0, w]],
        GateKind.TDG: [[1, 0], [0, w.conjugate()]],
    }
    if g.kind is GateKind.RZ:
        a = g.angle / 2
        return np.array([[complex(math.cos(a), -math.sin(a)), 0], [0, complex(math.cos(a), math.sin(a))]])
    return np.array(table[g.kind], dtype=complex)


def kron_gate(g: Gate, n: int) -> np.ndarray:
    """Full 2^n matrix built from Kronecker products; qubit 0 is the rightmost factor."""

    def embed(ops: dict[int, np.ndarray]) -> np.ndarray:
        return reduce(np.kron, [ops.get(q, _I2) for q in reversed(range(n))])

    if g.kind is GateKind.CNOT:
        c, t = g.qubits
        return embed({c: _P0}) + embed({c: _P1, t: _X})
    return embed({g.qubits[0]: _one_qubit_matrix(g)})


def kron_unitary(c: Circuit) -> np.ndarray:
    u = np.eye(2**c.num_qubits, dtype=complex)
    for g in c.gates():
        u = kron_gate(g, c.num_qubits) @ u
    return u


def phase_equal(u: np.ndarray, v: np.ndarray, tol: float = 1e-9) -> bool:
    """Brute-force global-phase comparison via the first sizable entry."""
    idx = np.unravel_index(np.argmax(np.abs(u)), u.shape)
    if abs(v[idx]) < 1e-12:
        return False
    phase = v[idx] / u[idx]
    return np.allclose(v, phase * u, atol=tol, rtol=0)


def random_circuit(num_qubits: int, num_gates: int, seed: int) -> Circuit:
    return generate_random_circuit(RandomCircuitSpec(num_qubits, num_gates, seed=seed))


def suite(count: int, max_qubits: int = 6, max_gates: int = 120, seed: int = 0) -> list[Circuit]:
    """Deterministic mixed suite of random circuits."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(2, max_qubits + 1))
        g = int(rng.integers(1, max_gates + 1))
        out.append(random_circuit(n, g, seed * 100_003 + i))
    return out


@st.composite
def gates_st(draw, num_qubits: int):
    if num_qubits >= 2 and draw(st.booleans()):
        a, b = draw(st.lists(st.integers(0, num_qubits - 1), min_size=2, max_size=2, unique=True))
        return Gate(GateKind.CNOT, (a, b))
    kind = draw(st.sampled_from(KINDS_1Q))
    q = draw(st.integers(0, num_qubits - 1))
    angle = None
    if kind is GateKind.RZ:
        angle = draw(st.sampled_from([0.25, 0.5, math.pi / 4, math.pi, 1.0, -0.25, 2.0]))
    return Gate(kind, (q,), angle)


@st.composite
def circuits_st(draw, max_qubits: int = 4, max_gates: int = 30):
    n = draw(st.integers(2, max_qubits))
    gates = draw(st.lists(gates_st(n), max_size=max_gates))
    return Circuit.from_gates(n, gates)


THETA1, THETA2 = 0.7, 1.1


def propagate_pair() -> tuple[Circuit, Circuit]:
    """Two segment-optimal circuits whose seam unlocks a chain of three rewrites.

    The H pairs around cx(0,1) flip it to cx(1,0), which then sandwiches an
    Rz on its control and cancels, and the freed Rz merges with the one in c2.
    """
    c1 = Circuit(2, [[cx(1, 0)], [rz(THETA1, 1)], [h(0), h(1)], [cx(0, 1)]])
    c2 = Circuit(2, [[h(0), h(1)], [rz(THETA2, 1)]])
    return c1, c2


def compression_circuit() -> Circuit:
    """H, X, X, H on one qubit, one gate per layer."""
    return Circuit(1, [[h(0)], [x(0)], [x(0)], [h(0)]])
