"""
Rewriting to a fixpoint
=======================

The reference rewriter applies window optimizations and single-gate left
shifts until neither applies. Each step lowers (cost, index sum)
lexicographically, which is why it stops.
"""

from laqe import GATE_COUNT, OptimizerConfig, RuleOracle, is_locally_optimal
from laqe.random_circuits import RandomCircuitSpec, generate_random_circuit, spread_layers
from laqe.rewrite import format_trace, potential, saturate

c = spread_layers(generate_random_circuit(RandomCircuitSpec(3, 40, seed=5)), seed=1)
print("start", potential(c, GATE_COUNT), "length", c.length)

out, trace = saturate(c, RuleOracle(), GATE_COUNT, omega=3)
print(format_trace(trace[:8]), "...")
print(len(trace), "steps, end", potential(out, GATE_COUNT))

print(is_locally_optimal(out, OptimizerConfig(omega=3)).describe())
