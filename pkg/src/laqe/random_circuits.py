"""Seeded random circuits for tests, demos and benchmarks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .circuit import Circuit, Gate, GateKind

DEFAULT_MIX: dict[GateKind, float] = {
    GateKind.H: 4.0,
    GateKind.X: 1.0,
    GateKind.Z: 1.0,
    GateKind.S: 1.0,
    GateKind.SDG: 1.0,
    GateKind.T: 1.0,
    GateKind.TDG: 1.0,
    GateKind.RZ: 2.0,
    GateKind.CNOT: 4.0,
}


@dataclass(frozen=True)
class RandomCircuitSpec:
    num_qubits: int
    num_gates: int
    gate_mix: Mapping[GateKind, float] = field(default_factory=lambda: dict(DEFAULT_MIX))
    seed: int = 0

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise ValueError("num_qubits must be positive")
        if self.num_gates < 0:
            raise ValueError("num_gates must be non-negative")
        mix = {GateKind(k): float(w) for k, w in self.gate_mix.items() if w > 0}
        if not mix:
            raise ValueError("gate_mix has no positive weight")
        if self.num_qubits < 2 and GateKind.CNOT in mix:
            raise ValueError("cx needs at least two qubits")
        object.__setattr__(self, "gate_mix", mix)


def random_gates(spec: RandomCircuitSpec) -> list[Gate]:
    rng = np.random.default_rng(spec.seed)
    kinds = list(spec.gate_mix)
    weights = np.array([spec.gate_mix[k] for k in kinds])
    picks = rng.choice(len(kinds), size=spec.num_gates, p=weights / weights.sum())
    gates = []
    for p in picks:
        kind = kinds[p]
        if kind is GateKind.CNOT:
            a, b = rng.choice(spec.num_qubits, size=2, replace=False)
            gates.append(Gate(kind, (int(a), int(b))))
        elif kind is GateKind.RZ:
            q = int(rng.integers(spec.num_qubits))
            gates.append(Gate(kind, (q,), float(rng.uniform(0.0, 2 * math.pi))))
        else:
            gates.append(Gate(kind, (int(rng.integers(spec.num_qubits)),)))
    return gates


def generate_random_circuit(spec: RandomCircuitSpec) -> Circuit:
    """Draw ``spec.num_gates`` gates and layer them greedily, as the QASM reader does."""
    return Circuit.from_gates(spec.num_qubits, random_gates(spec))


def spread_layers(c: Circuit, seed: int, max_gap: int = 2) -> Circuit:
    """Re-layer ``c`` with random gaps so that it is no longer compact.

    Each gate lands between 0 and ``max_gap`` layers after its earliest legal
    layer; per-qubit order is unchanged.
    """
    rng = np.random.default_rng(seed)
    last = [-1] * c.num_qubits
    placed: list[tuple[int, Gate]] = []
    for g in c.gates():
        k = 1 + max(last[q] for q in g.qubits) + int(rng.integers(max_gap + 1))
        for q in g.qubits:
            last[q] = k
        placed.append((k, g))
    depth = 1 + max((k for k, _ in placed), default=-1)
    layers: list[list[Gate]] = [[] for _ in range(depth)]
    for k, g in placed:
        layers[k].append(g)
    return Circuit(c.num_qubits, layers)
