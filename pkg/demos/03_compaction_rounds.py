"""
Why compaction matters
======================

An oracle that only sees neighbouring layers removes the X pair, but the
H gates are left with a gap between them. Only after compaction does the
next round remove them.
"""

from laqe import Circuit, OptimizerConfig, RuleOracle, RuleOracleConfig, h, oac, segopt, x

c = Circuit(1, [[h(0)], [x(0)], [x(0)], [h(0)]])
narrow = RuleOracle(RuleOracleConfig(adjacency="layer"))
cfg = OptimizerConfig(omega=2, epsilon=0.0, oracle=narrow)

one_pass = segopt(c, cfg)
print("after segopt:", [[g.qasm() for g in layer] for layer in one_pass])

out, report = oac(c, cfg)
print("after oac:", out.size, "gates in", report.rounds, "rounds")
for r in report.per_round:
    print("  cost", r.cost_before, "->", r.cost_after, "calls", r.oracle_calls)

# the default oracle matches along wires, so it needs no help here
out, report = oac(c, OptimizerConfig(omega=2, epsilon=0.0))
print("wire-matching oracle:", out.size, "gates in", report.rounds, "rounds")
