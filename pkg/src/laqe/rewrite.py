"""Reference rewriting semantics: Lopt and ShiftLeft steps, potential, saturation.

``saturate`` applies the two rules until neither fires. It is quadratic and
meant as a test oracle for the fast optimizer on small circuits (a few hundred
gates at most).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

from .circuit import Circuit, Gate, SegmentRange, index_sum, make_layer, strip_trailing_empty
from .cost import CostFn
from .oracle import Oracle


class Potential(NamedTuple):
    """``(cost, index_sum)``; tuple ordering is the lexicographic order."""

    cost: int
    index_sum: int


def potential(c: Circuit, f: CostFn) -> Potential:
    return Potential(f(c), index_sum(c))


@dataclass(frozen=True)
class RewriteStep:
    kind: str  # "lopt" or "shift"
    before: Potential
    after: Potential
    range: SegmentRange | None = None
    layer: int | None = None
    gate: Gate | None = None

    @property
    def before_cost(self) -> int:
        return self.before.cost

    @property
    def after_cost(self) -> int:
        return self.after.cost

    def log_line(self) -> str:
        if self.kind == "lopt":
            return f"LOPT {self.range} cost {self.before.cost}->{self.after.cost}"
        return f"SHIFT layer {self.layer} gate {self.gate.qasm()}"  # type: ignore[union-attr]


def try_lopt(
    c: Circuit, r: SegmentRange, orc: Oracle, f: CostFn
) -> tuple[Circuit, RewriteStep] | None:
    """Replace ``c[r]`` by the oracle's answer if that strictly lowers the cost."""
    i, j = r.clamp(c.length)
    seg = c.segment(i, j)
    better = orc(seg)
    if f(better) >= f(seg):
        return None
    out = c.segment(0, i) + better + c.segment(j, c.length)
    step = RewriteStep("lopt", potential(c, f), potential(out, f), range=SegmentRange(i, j))
    return out, step


def try_shift_left(c: Circuit, layer_index: int, g: Gate) -> Circuit | None:
    """Move ``g`` from layer ``layer_index`` into the previous layer when no qubit clashes."""
    layers = list(c.layers)
    if not 1 <= layer_index < len(layers) or g not in layers[layer_index]:
        raise ValueError(f"{g} is not in layer {layer_index}")
    prev = layers[layer_index - 1]
    if any(not g.disjoint(other) for other in prev):
        return None
    layers[layer_index - 1] = make_layer(prev + (g,))
    layers[layer_index] = tuple(h for h in layers[layer_index] if h != g)
    return Circuit._trusted(c.num_qubits, layers)


def saturate(
    c: Circuit,
    orc: Oracle,
    f: CostFn,
    omega: int,
    on_step: Callable[[RewriteStep, Circuit], None] | None = None,
) -> tuple[Circuit, list[RewriteStep]]:
    """Rewrite until neither rule applies.

    Each sweep first tries Lopt on every maximal window left to right, then
    ShiftLeft on every gate left to right; sweeps repeat until one changes
    nothing. ``on_step`` sees every step together with the circuit it
    produced. Trailing empty layers, which no rule can remove, are dropped
    from the final result.
    """
    if omega < 1:
        raise ValueError("omega must be at least 1")
    trace: list[RewriteStep] = []

    def record(step: RewriteStep, out: Circuit) -> None:
        trace.append(step)
        if on_step is not None:
            on_step(step, out)

    while True:
        progressed = False
        i = 0
        while i < max(1, c.length - omega + 1):
            res = try_lopt(c, SegmentRange(i, i + omega), orc, f)
            if res is None:
                i += 1
                continue
            c, step = res
            record(step, c)
            progressed = True
        for k in range(1, c.length):
            for g in c.layers[k]:
                shifted = try_shift_left(c, k, g)
                if shifted is None:
                    continue
                step = RewriteStep(
                    "shift", potential(c, f), potential(shifted, f), layer=k, gate=g
                )
                c = shifted
                record(step, c)
                progressed = True
        if not progressed:
            return strip_trailing_empty(c), trace


def format_trace(trace: list[RewriteStep]) -> str:
    return "".join(step.log_line() + "\n" for step in trace)
