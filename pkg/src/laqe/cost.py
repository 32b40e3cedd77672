"""Additive, integer-valued circuit cost metrics.

Every built-in metric is a non-negative integer combination of per-kind gate
counts, which makes it additive under concatenation and under union of
qubit-disjoint layers. Depth is deliberately absent: it is not additive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .circuit import Circuit, GateKind, Layer

_T_FAMILY = frozenset({GateKind.T, GateKind.TDG})


@dataclass(frozen=True)
class CostFn:
    """A named cost metric.

    ``weights`` maps gate kinds to non-negative integer weights and is only
    used by the ``weighted`` metric.
    """

    metric: str = "gates"
    weights: Mapping[GateKind, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.metric not in _METRICS:
            raise ValueError(f"unknown cost metric {self.metric!r}")
        clean = {}
        for k, w in dict(self.weights).items():
            if not isinstance(w, int) or isinstance(w, bool) or w < 0:
                raise ValueError(f"weight for {k} must be a non-negative integer, got {w!r}")
            clean[GateKind(k)] = w
        object.__setattr__(self, "weights", clean)

    def gate_weight(self, kind: GateKind) -> int:
        return _METRICS[self.metric](self, kind)

    def __call__(self, c: Circuit) -> int:
        return eval_cost(self, c)

    def layer_cost(self, layer: Layer) -> int:
        return sum(self.gate_weight(g.kind) for g in layer)

    @property
    def name(self) -> str:
        if self.metric != "weighted":
            return self.metric
        body = ",".join(f"{k.value}={w}" for k, w in sorted(self.weights.items()))
        return f"weighted:{body}"


_METRICS: dict[str, Callable[[CostFn, GateKind], int]] = {
    "gates": lambda f, k: 1,
    "t": lambda f, k: int(k in _T_FAMILY),
    "cnot": lambda f, k: int(k is GateKind.CNOT),
    "twoq": lambda f, k: int(k.arity == 2),
    "weighted": lambda f, k: f.weights.get(k, 0),
}

GATE_COUNT = CostFn("gates")
T_COUNT = CostFn("t")
CNOT_COUNT = CostFn("cnot")
TWO_QUBIT_COUNT = CostFn("twoq")


def eval_cost(f: CostFn, c: Circuit) -> int:
    if f.metric == "gates":
        return c.size
    return sum(f.layer_cost(layer) for layer in c)


def parse_cost(spec: str) -> CostFn:
    """Parse ``gates``, ``t``, ``cnot``, ``twoq`` or ``weighted:<kind>=<w>,...``."""
    spec = spec.strip()
    if spec.startswith("weighted:"):
        weights: dict[GateKind, int] = {}
        for item in filter(None, spec[len("weighted:"):].split(",")):
            name, sep, value = item.partition("=")
            if not sep:
                raise ValueError(f"expected <kind>=<weight>, got {item!r}")
            try:
                kind = GateKind(name.strip().lower())
            except ValueError:
                raise ValueError(f"unknown gate kind {name!r}") from None
            weights[kind] = int(value)
        if not weights:
            raise ValueError("weighted cost needs at least one <kind>=<weight>")
        return CostFn("weighted", weights)
    return CostFn(spec)


def check_additivity(
    f: Callable[[Circuit], int],
    samples: Iterable[tuple[Circuit, Circuit]],
) -> bool:
    """Check both additivity conditions on sample pairs.

    Condition one is checked on every pair via concatenation. Condition two is
    checked layer by layer for each pair of same-index layers that happen to
    be qubit-disjoint. ``f`` may be any circuit-to-int callable, which is how
    badly behaved metrics are exercised.
    """
    for c1, c2 in samples:
        if f(c1.concat(c2)) != f(c1) + f(c2):
            return False
        n = c1.num_qubits
        for l1, l2 in zip(c1.layers, c2.layers):
            q1 = {q for g in l1 for q in g.qubits}
            if any(q in q1 for g in l2 for q in g.qubits):
                continue
            union = Circuit(n, [l1 + l2])
            if f(union) != f(Circuit(n, [l1])) + f(Circuit(n, [l2])):
                return False
    return True
