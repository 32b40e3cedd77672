"""Segment oracles.

Contains:
    - Oracle: base class; counts every call, subclasses implement ``optimize``
    - RuleOracle / rule_oracle_optimize: built-in peephole optimizer
    - ExternalOracle / external_oracle_optimize: any QASM-in, QASM-out program
    - FunctionOracle: wraps a plain callable (handy for experiments and tests)

The optimizer relies on four oracle properties: output cost never exceeds
input cost, output is unitary-equivalent to input, re-running on its own
output gains nothing, and equal inputs give equal outputs. The rule oracle
gets all four by running its rules to a fixpoint.

Rules match along per-qubit wires, so unrelated gates on other qubits may sit
between the pattern's elements. With ``adjacency="layer"`` every step along a
wire must also cross exactly one layer, which models an oracle that only sees
gates on neighbouring layers; that mode never compacts its output.
"""

from __future__ import annotations

import logging
import shlex
import subprocess
import threading
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .circuit import Circuit, Gate, GateKind, angle_is_zero, make_layer, normalize_angle
from .cost import GATE_COUNT, CostFn
from .errors import OracleContractError, OracleError, QasmError
from .qasm import parse_qasm, print_qasm

log = logging.getLogger(__name__)

CANCEL_INVERSE_PAIR = "CancelInversePair"
MERGE_RZ = "MergeRz"
HEDGED_CNOT_FLIP = "HedgedCnotFlip"
CNOT_RZ_CNOT_COMMUTE = "CnotRzCnotCommute"
ALL_RULES = (HEDGED_CNOT_FLIP, CNOT_RZ_CNOT_COMMUTE, CANCEL_INVERSE_PAIR, MERGE_RZ)

_INVERSE = {
    GateKind.H: GateKind.H,
    GateKind.X: GateKind.X,
    GateKind.Z: GateKind.Z,
    GateKind.CNOT: GateKind.CNOT,
    GateKind.S: GateKind.SDG,
    GateKind.SDG: GateKind.S,
    GateKind.T: GateKind.TDG,
    GateKind.TDG: GateKind.T,
}


class Oracle:
    """Segment optimizer with a thread-safe call counter.

    Call the instance (``oracle(c)``) to optimize and count. ``max_length`` is
    the longest input, in layers, the oracle accepts; ``None`` means no limit.
    """

    max_length: int | None = None

    def __init__(self) -> None:
        self._calls = 0
        self._lock = threading.Lock()

    @property
    def calls(self) -> int:
        return self._calls

    def reset_calls(self) -> None:
        with self._lock:
            self._calls = 0

    def __call__(self, c: Circuit) -> Circuit:
        with self._lock:
            self._calls += 1
        if self.max_length is not None and c.length > self.max_length:
            raise OracleContractError(
                f"segment of {c.length} layers exceeds oracle limit {self.max_length}"
            )
        out = self.optimize(c)
        if out.num_qubits != c.num_qubits:
            raise OracleContractError(
                f"oracle changed qubit count from {c.num_qubits} to {out.num_qubits}"
            )
        return out

    def optimize(self, c: Circuit) -> Circuit:
        raise NotImplementedError


def call_count(oracle: Oracle) -> int:
    return oracle.calls


class FunctionOracle(Oracle):
    def __init__(self, fn: Callable[[Circuit], Circuit], max_length: int | None = None):
        super().__init__()
        self.fn = fn
        self.max_length = max_length

    def optimize(self, c: Circuit) -> Circuit:
        return self.fn(c)


# --- rule engine -----------------------------------------------------------


class _Node:
    __slots__ = ("kind", "qubits", "angle", "layer", "order", "prev", "next", "alive")

    def __init__(self, g: Gate, layer: int, order: int):
        self.kind = g.kind
        self.qubits = g.qubits
        self.angle = g.angle
        self.layer = layer
        self.order = order
        self.prev: dict[int, _Node | None] = {}
        self.next: dict[int, _Node | None] = {}
        self.alive = True

    def gate(self) -> Gate:
        return Gate(self.kind, self.qubits, self.angle)


def _unlink(node: _Node) -> None:
    for q in node.qubits:
        p, n = node.prev[q], node.next[q]
        if p is not None:
            p.next[q] = n
        if n is not None:
            n.prev[q] = p
    node.alive = False


class _Engine:
    def __init__(self, c: Circuit, rules: Sequence[str], strict_layers: bool):
        self.strict = strict_layers
        self.num_layers = c.length
        self.nodes: list[_Node] = []
        last: dict[int, _Node] = {}
        for i, g in c.indexed_gates():
            node = _Node(g, i, len(self.nodes))
            for q in g.qubits:
                p = last.get(q)
                node.prev[q] = p
                node.next[q] = None
                if p is not None:
                    p.next[q] = node
                last[q] = node
            self.nodes.append(node)
        table = {
            CANCEL_INVERSE_PAIR: self._cancel_pair,
            MERGE_RZ: self._merge_rz,
            HEDGED_CNOT_FLIP: self._hedged_flip,
            CNOT_RZ_CNOT_COMMUTE: self._cnot_rz_cnot,
        }
        self.rules = [table[r] for r in ALL_RULES if r in rules]

    def _step_ok(self, a: _Node, b: _Node, gap: int = 1) -> bool:
        return not self.strict or b.layer - a.layer == gap

    def _cancel_pair(self, g: _Node) -> bool:
        nxt = g.next[g.qubits[0]]
        if nxt is None or nxt.qubits != g.qubits or _INVERSE.get(g.kind) is not nxt.kind:
            return False
        if any(g.next[q] is not nxt for q in g.qubits) or not self._step_ok(g, nxt):
            return False
        _unlink(g)
        _unlink(nxt)
        return True

    def _merge_rz(self, g: _Node) -> bool:
        if g.kind is not GateKind.RZ:
            return False
        q = g.qubits[0]
        nxt = g.next[q]
        if nxt is None or nxt.kind is not GateKind.RZ or not self._step_ok(g, nxt):
            return False
        g.angle = normalize_angle(g.angle + nxt.angle)  # type: ignore[operator]
        _unlink(nxt)
        if angle_is_zero(g.angle):
            _unlink(g)
        return True

    def _hedged_flip(self, g: _Node) -> bool:
        if g.kind is not GateKind.CNOT:
            return False
        around = []
        for q in g.qubits:
            p, n = g.prev[q], g.next[q]
            if p is None or n is None or p.kind is not GateKind.H or n.kind is not GateKind.H:
                return False
            if not (self._step_ok(p, g) and self._step_ok(g, n)):
                return False
            around += [p, n]
        for node in around:
            _unlink(node)
        g.qubits = (g.qubits[1], g.qubits[0])
        return True

    def _cnot_rz_cnot(self, g: _Node) -> bool:
        if g.kind is not GateKind.CNOT:
            return False
        a, b = g.qubits
        mid = g.next[a]
        if mid is None or mid.kind is not GateKind.RZ:
            return False
        end = mid.next[a]
        if end is None or end.kind is not GateKind.CNOT or end.qubits != g.qubits:
            return False
        if g.next[b] is not end:
            return False
        if not (self._step_ok(g, mid) and self._step_ok(mid, end)):
            return False
        _unlink(g)
        _unlink(end)
        return True

    def run(self, max_passes: int) -> bool:
        """Apply rules until nothing fires; return False if the pass cap was hit first."""
        for _ in range(max_passes):
            changed = False
            for node in self.nodes:
                if not node.alive:
                    continue
                for rule in self.rules:
                    if rule(node):
                        changed = True
                        break
            if not changed:
                return True
        return False

    def circuit(self, num_qubits: int, compact: bool) -> Circuit:
        alive = [n for n in self.nodes if n.alive]
        if compact:
            alive.sort(key=lambda n: (n.layer, n.order))
            return Circuit.from_gates(num_qubits, (n.gate() for n in alive))
        buckets: list[list[Gate]] = [[] for _ in range(self.num_layers)]
        for n in alive:
            buckets[n.layer].append(n.gate())
        return Circuit._trusted(num_qubits, [make_layer(b) for b in buckets])


@dataclass
class RuleOracleConfig:
    enabled_rules: frozenset[str] = frozenset(ALL_RULES)
    max_passes: int = 1000
    adjacency: str = "dag"

    def __post_init__(self) -> None:
        if self.max_passes < 1:
            raise ValueError("max_passes must be at least 1")
        unknown = set(self.enabled_rules) - set(ALL_RULES)
        if unknown:
            raise ValueError(f"unknown rules: {sorted(unknown)}")
        if self.adjacency not in ("dag", "layer"):
            raise ValueError("adjacency must be 'dag' or 'layer'")


def rule_oracle_optimize(
    c: Circuit, cfg: RuleOracleConfig | None = None, f: CostFn = GATE_COUNT
) -> tuple[Circuit, bool]:
    """Run the peephole rules on ``c`` to a fixpoint.

    Returns the optimized circuit and whether a fixpoint was reached within
    ``cfg.max_passes``.
    """
    cfg = cfg or RuleOracleConfig()
    engine = _Engine(c, tuple(cfg.enabled_rules), strict_layers=cfg.adjacency == "layer")
    converged = engine.run(cfg.max_passes)
    out = engine.circuit(c.num_qubits, compact=cfg.adjacency == "dag")
    if f(out) > f(c):
        return c, converged
    return out, converged


class RuleOracle(Oracle):
    def __init__(self, cfg: RuleOracleConfig | None = None, cost: CostFn = GATE_COUNT):
        super().__init__()
        self.cfg = cfg or RuleOracleConfig()
        self.cost = cost
        self.exhausted = 0

    def optimize(self, c: Circuit) -> Circuit:
        out, converged = rule_oracle_optimize(c, self.cfg, self.cost)
        if not converged:
            self.exhausted += 1
            log.warning("rule oracle hit max_passes=%d before a fixpoint", self.cfg.max_passes)
        return out


# --- external process ------------------------------------------------------


@dataclass
class ExternalOracleConfig:
    command: Sequence[str] | str
    timeout: float = 60.0
    env: dict[str, str] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if isinstance(self.command, str):
            self.command = shlex.split(self.command)
        self.command = list(self.command)
        if not self.command:
            raise ValueError("external oracle command is empty")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")


def external_oracle_optimize(
    c: Circuit, cfg: ExternalOracleConfig, f: CostFn = GATE_COUNT
) -> tuple[Circuit, str]:
    """Pipe ``c`` through an external optimizer as QASM.

    Returns the circuit and its provenance: ``"external"`` when the program's
    answer was used, ``"fallback"`` when it cost more than the input and the
    input was returned instead.
    """
    try:
        proc = subprocess.run(
            cfg.command,
            input=print_qasm(c),
            capture_output=True,
            text=True,
            timeout=cfg.timeout,
            env=cfg.env,
        )
    except subprocess.TimeoutExpired as e:
        stderr = e.stderr.decode(errors="replace") if isinstance(e.stderr, bytes) else (e.stderr or "")
        raise OracleError(f"external oracle timed out after {cfg.timeout}s", stderr) from None
    except OSError as e:
        raise OracleError(f"cannot run external oracle {cfg.command[0]!r}: {e}") from None
    if proc.returncode != 0:
        raise OracleError(f"external oracle exited with status {proc.returncode}", proc.stderr)
    try:
        out = parse_qasm(proc.stdout)
    except QasmError as e:
        raise OracleError(f"external oracle produced unparsable QASM: {e}", proc.stderr) from None
    if out.num_qubits != c.num_qubits:
        raise OracleError(
            f"external oracle returned {out.num_qubits} qubits, expected {c.num_qubits}",
            proc.stderr,
        )
    if f(out) > f(c):
        return c, "fallback"
    return out, "external"


class ExternalOracle(Oracle):
    def __init__(self, cfg: ExternalOracleConfig, cost: CostFn = GATE_COUNT):
        super().__init__()
        self.cfg = cfg
        self.cost = cost
        self.fallbacks = 0
        self.last_provenance: str | None = None

    def optimize(self, c: Circuit) -> Circuit:
        out, provenance = external_oracle_optimize(c, self.cfg, self.cost)
        self.last_provenance = provenance
        if provenance == "fallback":
            self.fallbacks += 1
            log.debug("external oracle returned a costlier circuit; kept the input")
        return out
