"""Unitary simulation, equivalence checking and the optimality judgments.

Basis convention: qubit 0 is the least significant bit of a basis index, so
on two qubits ``|q1 q0>`` maps to index ``2*q1 + q0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .circuit import Circuit, Gate, GateKind, SegmentRange, layer_qubits
from .errors import VerificationInfeasible

MAX_DENSE_QUBITS = 12
MAX_PROBE_QUBITS = 24

_SQ2 = 1.0 / np.sqrt(2.0)
_FIXED = {
    GateKind.H: np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Z: np.diag([1, -1]).astype(complex),
    GateKind.S: np.diag([1, 1j]),
    GateKind.SDG: np.diag([1, -1j]),
    GateKind.T: np.diag([1, np.exp(1j * np.pi / 4)]),
    GateKind.TDG: np.diag([1, np.exp(-1j * np.pi / 4)]),
    # rows/cols indexed by (control, target) bits
    GateKind.CNOT: np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
}


def gate_matrix(g: Gate) -> np.ndarray:
    if g.kind is GateKind.RZ:
        half = g.angle / 2.0  # type: ignore[operator]
        return np.diag([np.exp(-1j * half), np.exp(1j * half)])
    return _FIXED[g.kind]


def _apply(state: np.ndarray, g: Gate, n: int) -> np.ndarray:
    """Apply ``g`` to a tensor of shape ``(2,)*n + (batch,)``."""
    axes = [n - 1 - q for q in g.qubits]
    k = len(axes)
    u = gate_matrix(g).reshape((2,) * (2 * k))
    state = np.tensordot(u, state, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(state, list(range(k)), axes)


def _simulate(c: Circuit, block: np.ndarray) -> np.ndarray:
    n = c.num_qubits
    state = block.reshape((2,) * n + (block.shape[1],))
    for g in c.gates():
        state = _apply(state, g, n)
    return state.reshape(2**n, block.shape[1])


def to_unitary(c: Circuit) -> np.ndarray:
    """Dense ``2^n x 2^n`` unitary, layers applied left to right."""
    n = c.num_qubits
    if n > MAX_DENSE_QUBITS:
        raise VerificationInfeasible(
            f"{n} qubits exceeds the dense simulation cap of {MAX_DENSE_QUBITS}; "
            "use the randomized state-probing check instead"
        )
    return _simulate(c, np.eye(2**n, dtype=complex))


def _same_up_to_phase(u1: np.ndarray, u2: np.ndarray, tol: float) -> bool:
    m = u1.conj().T @ u2
    diag = np.diagonal(m)
    pivot = diag[np.argmax(np.abs(diag))]
    if abs(pivot) < 0.5:
        return False
    phase = pivot / abs(pivot)
    return float(np.max(np.abs(m - phase * np.eye(m.shape[0])))) <= tol


def equivalent(c1: Circuit, c2: Circuit, tol: float = 1e-9) -> bool:
    """True iff the circuits implement the same unitary up to global phase."""
    if c1.num_qubits != c2.num_qubits:
        return False
    return _same_up_to_phase(to_unitary(c1), to_unitary(c2), tol)


def equivalent_randomized(
    c1: Circuit, c2: Circuit, tol: float = 1e-9, probes: int = 20, seed: int = 0
) -> bool:
    """Compare both circuits on random input states.

    Sound but incomplete: ``False`` proves inequivalence, ``True`` is only
    strong evidence.
    """
    if c1.num_qubits != c2.num_qubits:
        return False
    n = c1.num_qubits
    if n > MAX_PROBE_QUBITS:
        raise VerificationInfeasible(f"{n} qubits exceeds the probing cap of {MAX_PROBE_QUBITS}")
    rng = np.random.default_rng(seed)
    block = rng.normal(size=(2**n, probes)) + 1j * rng.normal(size=(2**n, probes))
    block /= np.linalg.norm(block, axis=0)
    v1, v2 = _simulate(c1, block), _simulate(c2, block)
    overlap = np.vdot(v1[:, 0], v2[:, 0])
    if abs(overlap) < 0.5:
        return False
    phase = overlap / abs(overlap)
    return float(np.max(np.abs(v2 - phase * v1))) <= tol


# --- judgments -----------------------------------------------------------------

Witness = Union[SegmentRange, tuple[int, Union[Gate, None]], None]


@dataclass(frozen=True)
class JudgmentResult:
    name: str
    holds: bool
    witness: Witness = None

    def __post_init__(self) -> None:
        if not self.holds and self.witness is None:
            raise ValueError("a failed judgment needs a witness")

    def __bool__(self) -> bool:
        return self.holds

    def describe(self) -> str:
        status = "PASS" if self.holds else "FAIL"
        if self.holds:
            return f"{status} {self.name}"
        w = self.witness
        if isinstance(w, SegmentRange):
            where = f"window={w}"
        else:
            layer, gate = w  # type: ignore[misc]
            where = f"layer={layer}" + (f" gate={gate.qasm()}" if gate is not None else " empty")
        return f"{status} {self.name} {where}"


def is_compact(c: Circuit) -> JudgmentResult:
    """No empty layers, and each gate after layer 0 shares a qubit with the previous layer."""
    prev: set[int] | None = None
    for i, layer in enumerate(c):
        if not layer:
            return JudgmentResult("compact", False, (i, None))
        if prev is not None:
            for g in layer:
                if not prev.intersection(g.qubits):
                    return JudgmentResult("compact", False, (i, g))
        prev = layer_qubits(layer)
    return JudgmentResult("compact", True)


def segment_windows(length: int, omega: int) -> list[SegmentRange]:
    """Maximal clamped windows; every shorter window sits inside one of these."""
    return [SegmentRange(i, i + omega) for i in range(max(1, length - omega + 1))]


def is_segment_optimal(c: Circuit, cfg) -> JudgmentResult:
    """No omega-layer window can be improved by ``cfg.oracle`` under ``cfg.cost``."""
    if c.length == 0:
        return JudgmentResult("segment_optimal", True)
    for r in segment_windows(c.length, cfg.omega):
        window = c.segment(r.start, r.end)
        if cfg.cost(cfg.oracle(window)) < cfg.cost(window):
            i, j = r.clamp(c.length)
            return JudgmentResult("segment_optimal", False, SegmentRange(i, j))
    return JudgmentResult("segment_optimal", True)


def is_locally_optimal(c: Circuit, cfg) -> JudgmentResult:
    res = is_compact(c)
    if not res:
        return JudgmentResult("locally_optimal", False, res.witness)
    res = is_segment_optimal(c, cfg)
    if not res:
        return JudgmentResult("locally_optimal", False, res.witness)
    return JudgmentResult("locally_optimal", True)
