"""Command-line entry point: ``laqe optimize | verify | bench | stats``.

Exit codes: 0 ok, 2 unreadable input, 3 oracle failure or contract
violation, 4 verification infeasible, 5 verification failed.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from collections import Counter
from typing import Sequence

from . import bench
from .circuit import Circuit
from .cost import CostFn, parse_cost
from .errors import OracleContractError, OracleError, QasmError, VerificationInfeasible
from .optimizer import OptimizerConfig, OptReport, RoundStats, oac_star
from .oracle import ExternalOracle, ExternalOracleConfig, Oracle, RuleOracle
from .qasm import parse_qasm, print_qasm
from .rewrite import format_trace, saturate
from .verify import (
    MAX_DENSE_QUBITS,
    equivalent,
    equivalent_randomized,
    is_compact,
    is_locally_optimal,
    is_segment_optimal,
)

EXIT_OK, EXIT_PARSE, EXIT_ORACLE, EXIT_INFEASIBLE, EXIT_FAILED = 0, 2, 3, 4, 5
SELF_CHECK_DENSE_QUBITS = 8

log = logging.getLogger("laqe")


def _read(path: str) -> Circuit:
    if path == "-":
        return parse_qasm(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_qasm(fh.read())


def _make_oracle(spec: str, timeout: float, cost: CostFn) -> Oracle:
    if spec == "rules":
        return RuleOracle(cost=cost)
    if spec.startswith("exec:"):
        return ExternalOracle(ExternalOracleConfig(spec[len("exec:"):], timeout=timeout), cost=cost)
    raise ValueError(f"unknown oracle {spec!r}; use 'rules' or 'exec:<command>'")


def _config(args: argparse.Namespace) -> OptimizerConfig:
    cost = parse_cost(args.cost)
    oracle = _make_oracle(args.oracle, args.oracle_timeout, cost)
    return OptimizerConfig(omega=args.omega, epsilon=args.epsilon, cost=cost, oracle=oracle)


def _check_equivalence(a: Circuit, b: Circuit, randomized: bool) -> tuple[bool, str]:
    if a.num_qubits != b.num_qubits:
        return False, "qubit counts differ"
    n = a.num_qubits
    if n <= SELF_CHECK_DENSE_QUBITS or (n <= MAX_DENSE_QUBITS and not randomized):
        return equivalent(a, b, 1e-9), "dense"
    if not randomized:
        raise VerificationInfeasible(
            f"{n} qubits is above the dense cap of {MAX_DENSE_QUBITS}; "
            "rerun with --randomized for a state-probing check"
        )
    return equivalent_randomized(a, b, 1e-9), "randomized, sound but incomplete"


def cmd_optimize(args: argparse.Namespace) -> int:
    circuit = _read(args.input)
    cfg = _config(args)
    if args.trace:
        if circuit.size > 200:
            log.warning("reference rewriter on %d gates will be slow", circuit.size)
        before = cfg.cost(circuit)
        out, trace = saturate(circuit, cfg.oracle, cfg.cost, cfg.omega)
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(format_trace(trace))
        report = OptReport(
            rounds=1,
            per_round=[RoundStats(before, cfg.cost(out), cfg.oracle.calls, circuit.length)],
            total_oracle_calls=cfg.oracle.calls,
            delta=before - cfg.cost(out),
            converged=True,
        )
    else:
        out, report = oac_star(circuit, cfg)

    if args.self_check:
        ok, how = _check_equivalence(circuit, out, randomized=True)
        log.info("self-check (%s): %s", how, "ok" if ok else "MISMATCH")
        if not ok:
            print("FAIL self-check: output is not equivalent to input", file=sys.stderr)
            return EXIT_FAILED

    text = print_qasm(out)
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    report_path = args.report
    if report_path is None and args.output and args.output != "-":
        report_path = args.output + ".report.json"
    if report_path == "-":
        stream = sys.stdout if args.output and args.output != "-" else sys.stderr
        stream.write(report.to_json() + "\n")
    elif report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            fh.write(report.to_json() + "\n")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    original = _read(args.original)
    optimized = _read(args.optimized)
    checks = [c.strip() for c in args.check.split(",") if c.strip()]
    unknown = set(checks) - {"equiv", "compact", "segment", "local"}
    if unknown:
        raise SystemExit(f"unknown check(s): {', '.join(sorted(unknown))}")
    failed = False
    if "equiv" in checks:
        ok, how = _check_equivalence(original, optimized, args.randomized)
        failed |= not ok
        print(f"{'PASS' if ok else 'FAIL'} equivalent ({how})")
    needs_oracle = {"segment", "local"} & set(checks)
    cfg = _config(args) if needs_oracle else None
    for name in checks:
        if name == "compact":
            res = is_compact(optimized)
        elif name == "segment":
            res = is_segment_optimal(optimized, cfg)
        elif name == "local":
            res = is_locally_optimal(optimized, cfg)
        else:
            continue
        failed |= not res.holds
        print(res.describe())
    return EXIT_FAILED if failed else EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    seeds = range(args.seed, args.seed + args.seeds)
    samples = bench.sweep(
        sizes,
        seeds,
        num_qubits=args.qubits,
        omega=args.omega,
        epsilon=args.epsilon,
        cost=parse_cost(args.cost),
        jobs=args.jobs,
    )
    text = bench.to_csv(samples)
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    c = _read(args.input)
    counts = Counter(g.kind.value for g in c.gates())
    print(f"qubits {c.num_qubits}")
    print(f"size {c.size}")
    print(f"length {c.length}")
    for kind, n in sorted(counts.items()):
        print(f"{kind} {n}")
    return EXIT_OK


def _optimizer_flags(p: argparse.ArgumentParser, oracle: bool = True) -> None:
    p.add_argument("--omega", type=int, default=40, help="segment length bound (layers)")
    p.add_argument("--epsilon", type=float, default=0.01, help="convergence threshold in [0, 1]")
    p.add_argument("--cost", default="gates", help="gates | t | cnot | twoq | weighted:<kind>=<w>,...")
    if oracle:
        p.add_argument("--oracle", default="rules", help="rules | exec:<command>")
        p.add_argument("--oracle-timeout", type=float, default=60.0, help="seconds per external call")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="laqe", description="Locally optimal circuit optimization")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="optimize a QASM circuit")
    p.add_argument("input", nargs="?", default="-", help="QASM file, or - for stdin")
    p.add_argument("-o", "--output", help="output QASM path (default stdout)")
    _optimizer_flags(p)
    p.add_argument("--report", help="report path, or - for the stream not carrying QASM")
    p.add_argument("--trace", help="use the reference rewriter and write its step log here")
    p.add_argument("--self-check", action="store_true", help="verify equivalence after optimizing")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("verify", help="check an optimized circuit against its original")
    p.add_argument("original")
    p.add_argument("optimized")
    _optimizer_flags(p)
    p.add_argument("--check", default="equiv,local", help="comma list of equiv,compact,segment,local")
    p.add_argument("--randomized", action="store_true", help="allow state probing above the dense cap")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="oracle-call scaling sweep over random circuits, CSV out")
    _optimizer_flags(p, oracle=False)
    p.add_argument("--sizes", default="500,1000,2000,4000,8000", help="comma list of gate counts")
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--seeds", type=int, default=3, help="circuits per size")
    p.add_argument("--qubits", type=int, default=5)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("stats", help="print size, length and per-kind gate counts")
    p.add_argument("input", nargs="?", default="-")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    level = getattr(logging, os.environ.get("LAQE_LOG", "WARNING").upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QasmError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (OracleError, OracleContractError) as e:
        print(f"oracle error: {e}", file=sys.stderr)
        return EXIT_ORACLE
    except VerificationInfeasible as e:
        print(f"verification infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
