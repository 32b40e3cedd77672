"""Locally optimal quantum circuit optimization over a layered circuit IR."""

from .circuit import (
    Circuit,
    Gate,
    GateKind,
    SegmentRange,
    concat,
    cx,
    h,
    length,
    rz,
    s,
    sdg,
    size,
    t,
    tdg,
    x,
    z,
)
from .cost import CNOT_COUNT, GATE_COUNT, T_COUNT, TWO_QUBIT_COUNT, CostFn, eval_cost, parse_cost
from .errors import (
    CircuitError,
    LaqeError,
    OracleContractError,
    OracleError,
    QasmError,
    RoundLimitError,
    VerificationInfeasible,
)
from .optimizer import OptimizerConfig, OptReport, compact, meld, oac, oac_star, segopt
from .oracle import (
    ExternalOracle,
    ExternalOracleConfig,
    FunctionOracle,
    Oracle,
    RuleOracle,
    RuleOracleConfig,
    call_count,
)
from .qasm import parse_qasm, print_qasm
from .random_circuits import RandomCircuitSpec, generate_random_circuit
from .verify import equivalent, is_compact, is_locally_optimal, is_segment_optimal, to_unitary

__version__ = "0.1.0"
