"""Layered circuit IR.

Contains:
    - GateKind, Gate: the fixed gate set and immutable gate values
    - h, x, z, s, sdg, t, tdg, rz, cx: gate constructors
    - Circuit: an immutable sequence of qubit-disjoint layers
    - SegmentRange: half-open layer range with overflow clamping
    - length, size, slice, concat: the basic circuit algebra

A layer is a tuple of gates acting on pairwise disjoint qubits, kept sorted by
lowest qubit so that equal layers compare equal. Qubit 0 is the least
significant bit wherever a basis ordering matters (see ``laqe.verify``).
"""

from __future__ import annotations

import builtins
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence

from . import _rope
from .errors import CircuitError

TWO_PI = 2.0 * math.pi
ANGLE_TOL = 1e-12


class GateKind(str, Enum):
    H = "h"
    X = "x"
    Z = "z"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    RZ = "rz"
    CNOT = "cx"

    @property
    def arity(self) -> int:
        return 2 if self is GateKind.CNOT else 1

    def __str__(self) -> str:
        return self.value


def normalize_angle(theta: float) -> float:
    """Reduce an angle into ``[0, 2π)``, snapping values within tolerance of 2π to 0."""
    if not math.isfinite(theta):
        raise CircuitError(f"rotation angle must be finite, got {theta!r}")
    r = math.fmod(theta, TWO_PI)
    if r < 0:
        r += TWO_PI
    if r >= TWO_PI - ANGLE_TOL:
        r = 0.0
    return r


def angle_is_zero(theta: float) -> bool:
    theta = normalize_angle(theta)
    return theta < ANGLE_TOL or theta > TWO_PI - ANGLE_TOL


def angles_close(a: float, b: float) -> bool:
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d) <= ANGLE_TOL


@dataclass(frozen=True, eq=False, slots=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self) -> None:
        kind = GateKind(self.kind)
        qubits = tuple(int(q) for q in self.qubits)
        if len(qubits) != kind.arity:
            raise CircuitError(f"{kind} takes {kind.arity} qubit(s), got {len(qubits)}")
        if any(q < 0 for q in qubits):
            raise CircuitError(f"negative qubit index in {qubits}")
        if len(set(qubits)) != len(qubits):
            raise CircuitError(f"{kind} applied to repeated qubit {qubits}")
        if kind is GateKind.RZ:
            if self.angle is None:
                raise CircuitError("rz needs an angle")
            angle: float | None = normalize_angle(float(self.angle))
        elif self.angle is not None:
            raise CircuitError(f"{kind} takes no angle")
        else:
            angle = None
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", qubits)
        object.__setattr__(self, "angle", angle)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Gate):
            return NotImplemented
        if self.kind is not other.kind or self.qubits != other.qubits:
            return False
        if self.angle is None:
            return True
        return angles_close(self.angle, other.angle)  # type: ignore[arg-type]

    def __hash__(self) -> int:
        return hash((self.kind, self.qubits))

    def __repr__(self) -> str:
        return self.qasm()

    def qasm(self) -> str:
        args = ",".join(f"q[{q}]" for q in self.qubits)
        if self.kind is GateKind.RZ:
            return f"rz({self.angle!r}) {args}"
        return f"{self.kind.value} {args}"

    def disjoint(self, other: Gate) -> bool:
        return not set(self.qubits) & set(other.qubits)


def h(q: int) -> Gate:
    return Gate(GateKind.H, (q,))


def x(q: int) -> Gate:
    return Gate(GateKind.X, (q,))


def z(q: int) -> Gate:
    return Gate(GateKind.Z, (q,))


def s(q: int) -> Gate:
    return Gate(GateKind.S, (q,))


def sdg(q: int) -> Gate:
    return Gate(GateKind.SDG, (q,))


def t(q: int) -> Gate:
    return Gate(GateKind.T, (q,))


def tdg(q: int) -> Gate:
    return Gate(GateKind.TDG, (q,))


def rz(theta: float, q: int) -> Gate:
    return Gate(GateKind.RZ, (q,), theta)


def cx(control: int, target: int) -> Gate:
    return Gate(GateKind.CNOT, (control, target))


Layer = tuple[Gate, ...]


def make_layer(gates: Iterable[Gate]) -> Layer:
    """Sort gates into canonical order and check they act on disjoint qubits."""
    layer = tuple(sorted(gates, key=lambda g: min(g.qubits)))
    seen: set[int] = set()
    for g in layer:
        for q in g.qubits:
            if q in seen:
                raise CircuitError(f"two gates on qubit {q} in one layer: {layer}")
            seen.add(q)
    return layer


def layer_qubits(layer: Layer) -> set[int]:
    return {q for g in layer for q in g.qubits}


@dataclass(frozen=True, slots=True)
class SegmentRange:
    """Half-open layer range ``[start, end)``; out-of-range ends are clamped on use."""

    start: int
    end: int

    def clamp(self, n: int) -> tuple[int, int]:
        i = max(0, self.start)
        j = min(self.end, n)
        return i, max(i, j)

    def __str__(self) -> str:
        return f"[{self.start},{self.end})"


class Circuit:
    """Immutable layered circuit on ``num_qubits`` qubits.

    Layers live in a persistent rope so ``segment`` and ``concat`` are
    logarithmic and share structure; ``layers`` materializes a tuple on demand.
    Integer indexing returns a layer. Slice indexing follows overflow clamping,
    not Python's wrap-around: ``c[-5:len(c)+5]`` is the whole circuit.
    """

    __slots__ = ("num_qubits", "_tree", "_layers", "_size")

    def __init__(self, num_qubits: int, layers: Iterable[Iterable[Gate]] = ()):
        if num_qubits < 1:
            raise CircuitError("a circuit needs at least one qubit")
        checked = []
        for layer in layers:
            lay = make_layer(layer)
            for g in lay:
                if max(g.qubits) >= num_qubits:
                    raise CircuitError(f"{g} out of range for {num_qubits} qubit(s)")
            checked.append(lay)
        self.num_qubits = num_qubits
        self._tree = _rope.build(checked)
        self._layers: tuple[Layer, ...] | None = tuple(checked)
        self._size: int | None = None

    @classmethod
    def _from_tree(cls, num_qubits: int, tree: _rope.Rope) -> Circuit:
        c = object.__new__(cls)
        c.num_qubits = num_qubits
        c._tree = tree
        c._layers = None
        c._size = None
        return c

    @classmethod
    def _trusted(cls, num_qubits: int, layers: Sequence[Layer]) -> Circuit:
        """Build from layers already known to be canonical and well formed."""
        c = cls._from_tree(num_qubits, _rope.build(layers))
        c._layers = tuple(layers)
        return c

    @classmethod
    def from_gates(cls, num_qubits: int, gates: Iterable[Gate]) -> Circuit:
        """Place gates greedily: each goes one layer after the last layer touching its qubits.

        Per-qubit gate order follows the iteration order. The result is
        compact and has no empty layers.
        """
        last = [-1] * num_qubits
        buckets: list[list[Gate]] = []
        for g in gates:
            if max(g.qubits) >= num_qubits:
                raise CircuitError(f"{g} out of range for {num_qubits} qubit(s)")
            k = 1 + max(last[q] for q in g.qubits)
            if k == len(buckets):
                buckets.append([])
            buckets[k].append(g)
            for q in g.qubits:
                last[q] = k
        return cls._trusted(num_qubits, [make_layer(b) for b in buckets])

    @property
    def layers(self) -> tuple[Layer, ...]:
        if self._layers is None:
            self._layers = tuple(_rope.iterate(self._tree))
        return self._layers

    @property
    def length(self) -> int:
        return _rope.length(self._tree)

    @property
    def size(self) -> int:
        if self._size is None:
            self._size = sum(len(layer) for layer in self.layers)
        return self._size

    def __len__(self) -> int:
        return self.length

    def __iter__(self) -> Iterator[Layer]:
        if self._layers is not None:
            return iter(self._layers)
        return _rope.iterate(self._tree)

    def __getitem__(self, key: int | slice):
        if isinstance(key, builtins.slice):
            if key.step not in (None, 1):
                raise ValueError("circuit segments do not support a step")
            start = 0 if key.start is None else key.start
            stop = self.length if key.stop is None else key.stop
            return self.segment(start, stop)
        return _rope.index(self._tree, key)

    def segment(self, start: int, end: int) -> Circuit:
        i, j = SegmentRange(start, end).clamp(self.length)
        if i == 0 and j == self.length:
            return self
        left, _ = _rope.split(self._tree, j)
        _, mid = _rope.split(left, i)
        return Circuit._from_tree(self.num_qubits, mid)

    def concat(self, other: Circuit) -> Circuit:
        if self.num_qubits != other.num_qubits:
            raise CircuitError(
                f"cannot concatenate circuits on {self.num_qubits} and {other.num_qubits} qubits"
            )
        if other._tree is None:
            return self
        if self._tree is None:
            return other
        return Circuit._from_tree(self.num_qubits, _rope.join(self._tree, other._tree))

    __add__ = concat

    def gates(self) -> Iterator[Gate]:
        for layer in self:
            yield from layer

    def indexed_gates(self) -> Iterator[tuple[int, Gate]]:
        for i, layer in enumerate(self):
            for g in layer:
                yield i, g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return (
            self.num_qubits == other.num_qubits
            and self.length == other.length
            and self.layers == other.layers
        )

    def __hash__(self) -> int:
        return hash((self.num_qubits, self.layers))

    def __repr__(self) -> str:
        body = " | ".join(" ".join(g.qasm() for g in layer) or "-" for layer in self)
        return f"Circuit({self.num_qubits}q, {self.length} layers: {body})"


def empty(num_qubits: int) -> Circuit:
    return Circuit(num_qubits)


def length(c: Circuit) -> int:
    return c.length


def size(c: Circuit) -> int:
    return c.size


def slice(c: Circuit, r: SegmentRange) -> Circuit:  # noqa: A001 - mirrors C[i:j]
    return c.segment(r.start, r.end)


def concat(c1: Circuit, c2: Circuit) -> Circuit:
    return c1.concat(c2)


def index_sum(c: Circuit) -> int:
    return sum(i * len(layer) for i, layer in enumerate(c))


def strip_trailing_empty(c: Circuit) -> Circuit:
    n = c.length
    layers = c.layers
    while n and not layers[n - 1]:
        n -= 1
    return c.segment(0, n)
