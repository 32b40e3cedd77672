"""Compaction, segment optimization and the OAC driver.

Contains:
    - OptimizerConfig, OptReport, RoundStats
    - compact(): one left-to-right pass placing every gate as early as possible
    - segopt(): divide and conquer; pieces of at most 2*omega layers go to the oracle
    - meld(): joins two segment-optimal circuits by re-optimizing their seam
    - oac(): rounds of segopt(compact(C)) until the circuit stops changing
    - oac_star(): same rounds, stopping once a round improves by at most epsilon
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable

from .circuit import Circuit
from .cost import GATE_COUNT, CostFn
from .errors import CircuitError, OracleContractError, RoundLimitError
from .oracle import Oracle, RuleOracle

MeldHook = Callable[[Circuit, Circuit, Circuit, int], None]


@dataclass
class OptimizerConfig:
    omega: int = 40
    epsilon: float = 0.01
    cost: CostFn = GATE_COUNT
    oracle: Oracle = field(default_factory=RuleOracle)
    round_cap: int = 1000
    # called as on_meld(c1, c2, result, oracle_calls) after each meld issued by segopt
    on_meld: MeldHook | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.omega < 1:
            raise ValueError("omega must be at least 1")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError("epsilon must lie in [0, 1]")
        if self.round_cap < 1:
            raise ValueError("round_cap must be at least 1")
        limit = self.oracle.max_length
        if limit is not None and limit < 2 * self.omega:
            raise ValueError(f"oracle accepts {limit} layers but segopt needs {2 * self.omega}")


@dataclass
class RoundStats:
    cost_before: int
    cost_after: int
    oracle_calls: int
    length: int

    @property
    def improvement(self) -> float:
        if self.cost_before == 0:
            return 0.0
        return 1.0 - self.cost_after / self.cost_before


@dataclass
class OptReport:
    rounds: int = 0
    per_round: list[RoundStats] = field(default_factory=list)
    total_oracle_calls: int = 0
    delta: int = 0
    converged: bool = False
    wall_time_s: float = 0.0
    flags: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "rounds": self.rounds,
            "per_round": [
                {
                    "cost_before": r.cost_before,
                    "cost_after": r.cost_after,
                    "oracle_calls": r.oracle_calls,
                    "length": r.length,
                }
                for r in self.per_round
            ],
            "total_oracle_calls": self.total_oracle_calls,
            "delta": self.delta,
            "converged": self.converged,
            "wall_time_s": self.wall_time_s,
            "flags": list(self.flags),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def compact(c: Circuit) -> Circuit:
    """Shift every gate into the earliest layer its qubits allow; drops empty layers."""
    return Circuit.from_gates(c.num_qubits, c.gates())


def _checked(cfg: OptimizerConfig, before: Circuit, after: Circuit) -> None:
    if cfg.cost(after) > cfg.cost(before):
        raise OracleContractError(
            f"oracle raised cost from {cfg.cost(before)} to {cfg.cost(after)}"
        )


def meld(c1: Circuit, c2: Circuit, cfg: OptimizerConfig) -> Circuit:
    """Join segment-optimal ``c1`` and ``c2`` into a segment-optimal circuit.

    The oracle sees the super segment made of the last omega layers of the
    left side and the first omega layers of the right side. Without an
    improvement the two sides are simply concatenated; otherwise the improved
    segment is melded into what is left of the left side and the result is
    melded with what is left of the right side.

    The recursion meld(meld(A, W'), B) runs on an explicit stack of pending
    right-hand sides, so long chains of improvements cannot overflow Python's
    call stack. Oracle calls happen in the same order as the recursive form.
    """
    if c1.num_qubits != c2.num_qubits:
        raise CircuitError("meld needs circuits on the same number of qubits")
    omega = cfg.omega
    pending: list[Circuit] = []
    left, right = c1, c2
    while True:
        if left.length == 0 or right.length == 0:
            result = right if left.length == 0 else left
        else:
            d1 = left.length
            window = left[d1 - omega:d1] + right[0:omega]
            improved = cfg.oracle(window)
            _checked(cfg, window, improved)
            if cfg.cost(improved) == cfg.cost(window):
                result = left + right
            else:
                pending.append(right[omega:right.length])
                left, right = left[0:d1 - omega], improved
                continue
        if not pending:
            return result
        left, right = result, pending.pop()


def segopt(c: Circuit, cfg: OptimizerConfig) -> Circuit:
    """Return a segment-optimal circuit equivalent to ``c``."""
    n = c.length
    if n == 0:
        return c
    if n <= 2 * cfg.omega:
        out = cfg.oracle(c)
        _checked(cfg, c, out)
        return out
    mid = n // 2
    if cfg.omega == 1:
        # even cut: at most one length-1 leaf, which keeps calls <= length + 2*delta
        mid += mid % 2
    left = segopt(c[0:mid], cfg)
    right = segopt(c[mid:n], cfg)
    if cfg.on_meld is None:
        return meld(left, right, cfg)
    before = cfg.oracle.calls
    out = meld(left, right, cfg)
    cfg.on_meld(left, right, out, cfg.oracle.calls - before)
    return out


def _run_rounds(
    c: Circuit, cfg: OptimizerConfig, stop: Callable[[Circuit, Circuit], bool]
) -> tuple[Circuit, OptReport]:
    report = OptReport()
    start = time.perf_counter()
    cost = cfg.cost
    first_cost = cost(c)
    current = c
    exhausted0 = getattr(cfg.oracle, "exhausted", 0)
    fallbacks0 = getattr(cfg.oracle, "fallbacks", 0)
    try:
        while True:
            if report.rounds >= cfg.round_cap:
                raise RoundLimitError(f"no convergence after {cfg.round_cap} rounds")
            calls0 = cfg.oracle.calls
            before = cost(current)
            compacted = compact(current)
            nxt = segopt(compacted, cfg)
            stats = RoundStats(before, cost(nxt), cfg.oracle.calls - calls0, compacted.length)
            report.per_round.append(stats)
            report.rounds += 1
            report.total_oracle_calls += stats.oracle_calls
            done = stop(current, nxt)
            current = nxt
            if done:
                break
        report.converged = True
    except Exception as e:
        e.report = report  # type: ignore[attr-defined]
        raise
    finally:
        report.delta = first_cost - cost(current)
        report.wall_time_s = time.perf_counter() - start
        exhausted = getattr(cfg.oracle, "exhausted", 0) - exhausted0
        fallbacks = getattr(cfg.oracle, "fallbacks", 0) - fallbacks0
        if exhausted:
            report.flags.append(f"rule_oracle_pass_cap_hit={exhausted}")
        if fallbacks:
            report.flags.append(f"external_oracle_fallbacks={fallbacks}")
    return current, report


def oac(c: Circuit, cfg: OptimizerConfig) -> tuple[Circuit, OptReport]:
    """Optimize to local optimality: repeat rounds until a round changes nothing."""
    return _run_rounds(c, cfg, lambda before, after: after == before)


def oac_star(c: Circuit, cfg: OptimizerConfig) -> tuple[Circuit, OptReport]:
    """Repeat rounds until one improves the cost by a fraction of at most ``cfg.epsilon``."""

    def stop(before: Circuit, after: Circuit) -> bool:
        cb = cfg.cost(before)
        if cb == 0:
            return True
        return 1.0 - cfg.cost(after) / cb <= cfg.epsilon

    return _run_rounds(c, cfg, stop)
