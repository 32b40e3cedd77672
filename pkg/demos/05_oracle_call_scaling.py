"""
Oracle calls grow linearly
==========================

Total oracle calls over a doubling sweep of random circuits. Ratios near 2
mean linear growth.
"""

from laqe.bench import growth_factors, sweep

samples = sweep([500, 1000, 2000, 4000], seeds=range(3), num_qubits=5, omega=40)

print("gates  layers  calls  delta  rounds  first-round share")
for s in samples:
    print(f"{s.num_gates:5d}  {s.circuit_length:6d}  {s.oracle_calls:5d}  {s.delta:5d}  {s.rounds:6d}  {s.first_round_share:.3f}")

print("growth per doubling:", [round(f, 2) for f in growth_factors(samples)])
