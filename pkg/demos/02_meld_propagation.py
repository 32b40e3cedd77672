"""
Propagating an optimization across a seam
==========================================

Neither half can be improved on its own. Joining them exposes H gates
around a CNOT; flipping it unlocks a CNOT-Rz-CNOT cancellation, and the
freed Rz merges with its neighbour. meld chases the chain in a few calls.
"""

from laqe import Circuit, OptimizerConfig, cx, equivalent, h, is_segment_optimal, meld, rz

c1 = Circuit(2, [[cx(1, 0)], [rz(0.7, 1)], [h(0), h(1)], [cx(0, 1)]])
c2 = Circuit(2, [[h(0), h(1)], [rz(1.1, 1)]])

cfg = OptimizerConfig(omega=2)
print("halves segment optimal:", bool(is_segment_optimal(c1, cfg)), bool(is_segment_optimal(c2, cfg)))
cfg.oracle.reset_calls()

out = meld(c1, c2, cfg)
print("before", c1.size + c2.size, "gates; after", out.size)
print("oracle calls", cfg.oracle.calls)
print("result:", [g.qasm() for g in out.gates()])
print("equivalent:", equivalent(c1 + c2, out))
