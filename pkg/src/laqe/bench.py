"""Oracle-call scaling harness.

Runs OAC* over seeded random circuits of increasing size and records one
sample per run. Per-round oracle calls are re-checked against
``length + 2 * improvement`` as samples are collected.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

from .cost import CostFn, GATE_COUNT
from .errors import OracleContractError
from .optimizer import OptimizerConfig, oac_star
from .oracle import RuleOracle
from .random_circuits import RandomCircuitSpec, generate_random_circuit

CSV_COLUMNS = (
    "num_gates",
    "seed",
    "num_qubits",
    "circuit_size",
    "circuit_length",
    "oracle_calls",
    "delta",
    "rounds",
    "wall_time",
    "round_fractions",
)


@dataclass(frozen=True)
class BenchSample:
    num_gates: int
    seed: int
    num_qubits: int
    circuit_size: int
    circuit_length: int
    oracle_calls: int
    delta: int
    rounds: int
    wall_time: float
    round_fractions: tuple[float, ...]

    @property
    def first_round_share(self) -> float:
        """Fraction of the total improvement achieved by the first round."""
        if self.delta == 0:
            return 1.0
        return self.round_fractions[0]


def run_one(
    spec: RandomCircuitSpec, omega: int, epsilon: float, cost: CostFn = GATE_COUNT
) -> BenchSample:
    c = generate_random_circuit(spec)
    cfg = OptimizerConfig(omega=omega, epsilon=epsilon, cost=cost, oracle=RuleOracle(cost=cost))
    _, report = oac_star(c, cfg)
    for r in report.per_round:
        bound = r.length + 2 * (r.cost_before - r.cost_after)
        if r.oracle_calls > bound:
            raise OracleContractError(
                f"round made {r.oracle_calls} oracle calls, bound is {bound} (seed {spec.seed})"
            )
    shares = tuple(
        (r.cost_before - r.cost_after) / report.delta if report.delta else 0.0
        for r in report.per_round
    )
    return BenchSample(
        num_gates=spec.num_gates,
        seed=spec.seed,
        num_qubits=spec.num_qubits,
        circuit_size=c.size,
        circuit_length=c.length,
        oracle_calls=report.total_oracle_calls,
        delta=report.delta,
        rounds=report.rounds,
        wall_time=report.wall_time_s,
        round_fractions=shares,
    )


def _run_packed(args: tuple) -> BenchSample:
    return run_one(*args)


def sweep(
    sizes: Sequence[int],
    seeds: Iterable[int],
    num_qubits: int = 5,
    omega: int = 40,
    epsilon: float = 0.01,
    cost: CostFn = GATE_COUNT,
    jobs: int = 1,
) -> list[BenchSample]:
    seeds = list(seeds)
    tasks = [
        (RandomCircuitSpec(num_qubits, n, seed=seed), omega, epsilon, cost)
        for n in sizes
        for seed in seeds
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            samples = list(pool.map(_run_packed, tasks))
    else:
        samples = [_run_packed(t) for t in tasks]
    return sorted(samples, key=lambda s: (s.num_gates, s.seed))


def to_csv(samples: Iterable[BenchSample]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for s in samples:
        row = asdict(s)
        row["wall_time"] = f"{s.wall_time:.6f}"
        row["round_fractions"] = ";".join(f"{f:.6f}" for f in s.round_fractions)
        writer.writerow(row)
    return buf.getvalue()


def growth_factors(samples: Iterable[BenchSample]) -> list[float]:
    """Ratio of total oracle calls between consecutive sizes of a sweep."""
    totals: dict[int, int] = {}
    for s in samples:
        totals[s.num_gates] = totals.get(s.num_gates, 0) + s.oracle_calls
    sizes = sorted(totals)
    return [totals[b] / totals[a] for a, b in zip(sizes, sizes[1:])]
