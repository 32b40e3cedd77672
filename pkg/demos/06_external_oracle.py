"""
Plugging in an external optimizer
=================================

Any program that reads QASM on stdin and writes QASM on stdout can serve as
the oracle. Here the package optimizes its own windows through a
subprocess, and then a deliberately bad program shows the fallback.
"""

import sys

from laqe import ExternalOracle, ExternalOracleConfig, OptimizerConfig, oac_star
from laqe.random_circuits import RandomCircuitSpec, generate_random_circuit

c = generate_random_circuit(RandomCircuitSpec(3, 150, seed=2))

itself = ExternalOracle(ExternalOracleConfig([sys.executable, "-m", "laqe", "optimize", "--omega", "4"]))
out, report = oac_star(c, OptimizerConfig(omega=10, oracle=itself))
print("subprocess oracle:", c.size, "->", out.size, "gates,", report.total_oracle_calls, "calls")

# appends two gates to whatever it is given
worse = [sys.executable, "-c", "import sys; sys.stdout.write(sys.stdin.read() + 'h q[0];\\nh q[0];\\n')"]
bad = ExternalOracle(ExternalOracleConfig(worse))
out, report = oac_star(c, OptimizerConfig(omega=10, oracle=bad))
print("costlier oracle:", c.size, "->", out.size, "gates; flags", report.flags)
