"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the PASS/FAIL lines are
printed even when output capture is on.
"""

import sys
import time

import numpy as np
import pytest

from laqe import optimizer as opt_mod
from laqe.bench import growth_factors, sweep
from laqe.circuit import Circuit
from laqe.cost import GATE_COUNT
from laqe.optimizer import OptimizerConfig, compact, meld, oac, oac_star, segopt
from laqe.oracle import (
    ExternalOracle,
    ExternalOracleConfig,
    FunctionOracle,
    RuleOracle,
    RuleOracleConfig,
    rule_oracle_optimize,
)
from laqe.random_circuits import RandomCircuitSpec, generate_random_circuit, spread_layers
from laqe.rewrite import saturate
from laqe.verify import equivalent, is_locally_optimal, is_segment_optimal

from support import compression_circuit, propagate_pair

PY = sys.executable


@pytest.fixture
def announce(capsys):
    def emit(number: int, title: str, ok: bool, detail: str = "") -> None:
        with capsys.disabled():
            print(f"\nACCEPT {number:>2} {'PASS' if ok else 'FAIL'} {title}" + (f" ({detail})" if detail else ""))
        assert ok, f"criterion {number} failed: {detail}"

    return emit


def random_suite(count, qubits=(2, 8), gates=(20, 2000), seed=0):
    """Seeded circuits with qubit counts and log-uniform gate counts in the given ranges."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(qubits[0], qubits[1] + 1))
        g = int(np.exp(rng.uniform(np.log(gates[0]), np.log(gates[1]))))
        out.append(generate_random_circuit(RandomCircuitSpec(n, g, seed=seed * 1_000_003 + i)))
    return out


def small_suite():
    return random_suite(60, qubits=(2, 8), gates=(5, 200), seed=7)


def test_01_meld_worked_example(announce):
    start = time.perf_counter()
    c1, c2 = propagate_pair()
    cfg = OptimizerConfig(omega=2, epsilon=0.0)
    out = meld(c1, c2, cfg)
    removed = c1.size + c2.size - out.size
    ok = removed == 7 and equivalent(c1 + c2, out, 1e-9)
    elapsed = time.perf_counter() - start
    announce(1, "meld worked example removes 7 gates", ok and elapsed < 1, f"removed={removed} t={elapsed:.3f}s")


def test_02_compaction_unlocks(announce):
    start = time.perf_counter()
    layer_oracle = RuleOracle(RuleOracleConfig(adjacency="layer"))
    cfg = OptimizerConfig(omega=2, epsilon=0.0, oracle=layer_oracle)
    c = compression_circuit()
    seg = segopt(c, cfg)
    kinds = [g.kind.value for g in seg.gates()]
    out, rep = oac(c, cfg)
    elapsed = time.perf_counter() - start
    ok = kinds == ["h", "h"] and out.size == 0 and rep.rounds >= 2 and elapsed < 1
    announce(2, "segopt keeps H pair, oac removes all 4", ok, f"segopt={kinds} kappa={rep.rounds} t={elapsed:.3f}s")


def test_03_segopt_call_bound(announce, monkeypatch):
    start = time.perf_counter()
    suite = random_suite(500, seed=1)
    omegas = [2, 3, 5, 10, 40]
    violations = []
    checked = 0
    real = opt_mod.segopt

    def instrumented(c, cfg):
        nonlocal checked
        before_calls, before_cost = cfg.oracle.calls, cfg.cost(c)
        out = real(c, cfg)
        calls = cfg.oracle.calls - before_calls
        delta = before_cost - cfg.cost(out)
        if c.length >= 2:
            checked += 1
            if calls > c.length + 2 * delta - 1:
                violations.append((c.length, delta, calls))
        return out

    # recursive calls go through the module global, so every invocation is checked
    monkeypatch.setattr(opt_mod, "segopt", instrumented)
    for i, c in enumerate(suite):
        cfg = OptimizerConfig(omega=omegas[i % len(omegas)], oracle=RuleOracle())
        opt_mod.segopt(c, cfg)
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < 120
    announce(
        3,
        "segopt calls <= length + 2*delta - 1",
        ok,
        f"{len(suite)} circuits, {checked} invocations, {len(violations)} violations, t={elapsed:.1f}s",
    )


def test_04_meld_call_bound(announce):
    start = time.perf_counter()
    suite = random_suite(1000, qubits=(2, 6), gates=(10, 400), seed=2)
    violations = pairs = 0
    for i in range(0, len(suite), 2):
        a, b = suite[i], suite[i + 1]
        n = max(a.num_qubits, b.num_qubits)
        a, b = Circuit(n, a.layers), Circuit(n, b.layers)
        cfg = OptimizerConfig(omega=[2, 4, 8][i % 3], oracle=RuleOracle())
        c1, c2 = segopt(a, cfg), segopt(b, cfg)
        cfg.oracle.reset_calls()
        out = meld(c1, c2, cfg)
        delta = c1.size + c2.size - out.size
        pairs += 1
        if cfg.oracle.calls > 1 + 2 * delta:
            violations += 1
    elapsed = time.perf_counter() - start
    ok = pairs >= 500 and violations == 0 and elapsed < 120
    announce(4, "meld calls <= 1 + 2*delta", ok, f"{pairs} pairs, {violations} violations, t={elapsed:.1f}s")


def test_05_local_optimality(announce):
    start = time.perf_counter()
    failures = []
    suite = random_suite(200, qubits=(2, 8), gates=(5, 400), seed=3)
    for i, c in enumerate(suite):
        omega = [2, 3, 5, 40][i % 4]
        cfg = OptimizerConfig(omega=omega, epsilon=0.0)
        out, _ = oac(spread_layers(c, seed=i), cfg)
        res = is_locally_optimal(out, cfg)
        _, trace = saturate(out, cfg.oracle, cfg.cost, omega)
        if not res or trace:
            failures.append((i, res.describe(), len(trace)))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 300
    announce(5, "oac output locally optimal, saturate takes 0 steps", ok, f"{len(suite)} circuits, {len(failures)} failures, t={elapsed:.1f}s")


def test_06_equivalence_of_every_pass(announce):
    start = time.perf_counter()
    failures = []
    for i, c in enumerate(small_suite()):
        cfg = OptimizerConfig(omega=[2, 3, 5][i % 3], epsilon=0.0)
        spread = spread_layers(c, seed=i)
        half = c.length // 2
        left, right = segopt(c[0:half], cfg), segopt(c[half:c.length], cfg)
        outputs = {
            "compact": (spread, compact(spread)),
            "rule_oracle": (c, rule_oracle_optimize(c)[0]),
            "segopt": (c, segopt(c, cfg)),
            "meld": (c, meld(left, right, cfg)),
            "oac": (spread, oac(spread, cfg)[0]),
            "oac_star": (spread, oac_star(spread, OptimizerConfig(omega=cfg.omega, epsilon=0.01))[0]),
            "saturate": (spread, saturate(spread, cfg.oracle, cfg.cost, cfg.omega)[0]),
        }
        for name, (before, after) in outputs.items():
            if not equivalent(before, after, 1e-9):
                failures.append((i, name))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 300
    announce(6, "every pass preserves the unitary at 1e-9", ok, f"60 circuits x 7 passes, {len(failures)} failures, t={elapsed:.1f}s")


def test_07_potential_decreases(announce):
    violations = steps = shifts = 0
    for i, c in enumerate(random_suite(80, qubits=(2, 6), gates=(5, 200), seed=4)):
        spread = spread_layers(c, seed=i, max_gap=3)
        _, trace = saturate(spread, RuleOracle(), GATE_COUNT, [2, 3, 5][i % 3])
        for step in trace:
            steps += 1
            if not step.after < step.before:
                violations += 1
            if step.kind == "shift":
                shifts += 1
                if step.after.index_sum != step.before.index_sum - 1 or step.after.cost != step.before.cost:
                    violations += 1
    ok = violations == 0 and shifts > 0
    announce(7, "potential strictly decreases on every rewrite step", ok, f"{steps} steps, {shifts} shifts, {violations} violations")


def test_08_oac_star_semantics(announce):
    problems = []
    for i, c in enumerate(random_suite(60, qubits=(2, 6), gates=(20, 600), seed=5)):
        omega = [2, 4, 10][i % 3]
        a, _ = oac(c, OptimizerConfig(omega=omega, epsilon=0.0))
        b, _ = oac_star(c, OptimizerConfig(omega=omega, epsilon=0.0))
        if a != b:
            problems.append((i, "eps=0 differs from oac"))
        _, rep = oac_star(c, OptimizerConfig(omega=omega, epsilon=0.01))
        if rep.per_round[-1].improvement > 0.01 or not rep.converged:
            problems.append((i, "eps=0.01 last round too large"))
        cfg1 = OptimizerConfig(omega=omega, epsilon=1.0)
        out1, rep1 = oac_star(c, cfg1)
        if rep1.rounds != 1 or not is_segment_optimal(out1, cfg1):
            problems.append((i, "eps=1"))
    announce(8, "oac_star epsilon semantics", not problems, f"60 circuits, problems={problems[:3]}")


def test_09_linear_oracle_calls(announce):
    start = time.perf_counter()
    samples = sweep([500, 1000, 2000, 4000, 8000], range(3), num_qubits=5, omega=40, epsilon=0.01)
    factors = growth_factors(samples)
    elapsed = time.perf_counter() - start
    ok = all(1.5 <= f <= 3.0 for f in factors) and elapsed < 600
    announce(9, "oracle calls grow 1.5x-3x per doubling", ok, "factors=" + ",".join(f"{f:.2f}" for f in factors) + f" t={elapsed:.1f}s")


def test_10_meld_cost_contract(announce):
    melds = cost_violations = not_optimal = 0

    def hook(left, right, out, calls):
        nonlocal melds, cost_violations, not_optimal
        melds += 1
        if GATE_COUNT(out) > GATE_COUNT(left) + GATE_COUNT(right):
            cost_violations += 1
        if not is_segment_optimal(out, checker):
            not_optimal += 1

    for i, c in enumerate(random_suite(120, qubits=(2, 8), gates=(20, 800), seed=6)):
        omega = [2, 3, 5, 10][i % 4]
        checker = OptimizerConfig(omega=omega)
        segopt(c, OptimizerConfig(omega=omega, on_meld=hook))
    ok = melds > 0 and cost_violations == 0 and not_optimal == 0
    announce(10, "meld cost contract and segment optimality", ok, f"{melds} melds, {cost_violations} cost violations, {not_optimal} not optimal")


ECHO = [PY, "-c", "import sys; sys.stdout.write(sys.stdin.read())"]
WORSE = [PY, "-c", "import sys; s = sys.stdin.read(); sys.stdout.write(s + 'h q[0];\\nh q[0];\\n')"]


def test_11_external_oracle_protocol(announce):
    c = random_suite(1, qubits=(3, 3), gates=(120, 120), seed=8)[0]
    noop = FunctionOracle(lambda x: x)
    ref, ref_rep = oac_star(c, OptimizerConfig(omega=10, oracle=noop))
    echo = ExternalOracle(ExternalOracleConfig(ECHO, timeout=30))
    got, rep = oac_star(c, OptimizerConfig(omega=10, oracle=echo))
    echo_ok = got == ref and rep.total_oracle_calls == ref_rep.total_oracle_calls and not rep.flags

    worse = ExternalOracle(ExternalOracleConfig(WORSE, timeout=30))
    out, wrep = oac_star(c, OptimizerConfig(omega=10, oracle=worse))
    worse_ok = (
        GATE_COUNT(out) <= GATE_COUNT(c)
        and worse.fallbacks == wrep.total_oracle_calls > 0
        and any(f.startswith("external_oracle_fallbacks=") for f in wrep.flags)
    )
    announce(
        11,
        "external oracle echo and cost-regression fallback",
        echo_ok and worse_ok,
        f"echo_ok={echo_ok} fallbacks={worse.fallbacks} flags={wrep.flags}",
    )
