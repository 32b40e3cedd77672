"""OpenQASM 2.0 subset reader and writer.

Accepted input: the ``OPENQASM 2.0;`` header, an optional
``include "qelib1.inc";``, exactly one ``qreg``, and the statements
``h x z s sdg t tdg q[i];``, ``rz(<expr>) q[i];`` and ``cx q[i],q[j];``.
``//`` comments run to end of line. Anything else is rejected with a
line:column diagnostic.

Gates are layered as they are read (see ``Circuit.from_gates``), so a parsed
circuit is already compact.
"""

from __future__ import annotations

import ast
import math
import operator
import re
from typing import Iterator

from .circuit import Circuit, Gate, GateKind
from .errors import QasmError

_NAME = re.compile(r"[A-Za-z_]\w*")
_HEADER = re.compile(r"OPENQASM\s+(\S+)$")
_INCLUDE = re.compile(r'include\s+"([^"]*)"$')
_QREG = re.compile(r"qreg\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]$")
_ARG = re.compile(r"([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]$")

_GATES = {k.value: k for k in GateKind}
_UNSUPPORTED = {
    "creg": "classical registers",
    "measure": "measurement",
    "barrier": "barriers",
    "reset": "reset",
    "gate": "custom gate definitions",
    "opaque": "opaque gate declarations",
    "if": "classical control",
}

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}


def _eval_angle(expr: str, line: int, col: int) -> float:
    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError:
        raise QasmError(f"bad angle expression {expr!r}", line, col) from None

    def ev(node: ast.AST) -> float:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        raise QasmError(f"unsupported construct in angle expression {expr!r}", line, col)

    try:
        value = ev(tree)
    except ZeroDivisionError:
        raise QasmError(f"division by zero in {expr!r}", line, col) from None
    if not math.isfinite(value):
        raise QasmError(f"angle {expr!r} is not finite", line, col)
    return value


def _statements(text: str) -> Iterator[tuple[str, int, int]]:
    buf: list[str] = []
    start: tuple[int, int] | None = None
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        code = raw.split("//", 1)[0]
        for col, ch in enumerate(code, 1):
            if ch == ";":
                where = start or (lineno, col)
                yield "".join(buf).strip(), where[0], where[1]
                buf, start = [], None
            else:
                if start is None and not ch.isspace():
                    start = (lineno, col)
                buf.append(ch)
        buf.append("\n")
    if "".join(buf).strip():
        assert start is not None
        raise QasmError("statement not terminated by ';'", *start)


def _split_call(stmt: str, line: int, col: int) -> tuple[str, str | None, str]:
    m = _NAME.match(stmt)
    if not m:
        raise QasmError(f"syntax error near {stmt[:20]!r}", line, col)
    name = m.group(0)
    rest = stmt[m.end():].lstrip()
    param = None
    if rest.startswith("("):
        depth = 0
        for i, ch in enumerate(rest):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0:
                param, rest = rest[1:i], rest[i + 1:]
                break
        else:
            raise QasmError("unbalanced parentheses", line, col)
    return name, param, rest.strip()


def parse_qasm(text: str) -> Circuit:
    """Parse the supported OpenQASM 2.0 subset into a compact circuit."""
    header_seen = False
    reg: tuple[str, int] | None = None
    gates: list[Gate] = []
    for stmt, line, col in _statements(text):
        if not stmt:
            continue
        if not header_seen:
            m = _HEADER.match(stmt)
            if not m:
                raise QasmError("expected 'OPENQASM 2.0;' header", line, col)
            if m.group(1) != "2.0":
                raise QasmError(f"unsupported OpenQASM version {m.group(1)}", line, col)
            header_seen = True
            continue
        m = _INCLUDE.match(stmt)
        if m:
            if m.group(1) != "qelib1.inc":
                raise QasmError(f"unsupported include {m.group(1)!r}", line, col)
            continue
        m = _QREG.match(stmt)
        if m:
            if reg is not None:
                raise QasmError("only one qreg is supported", line, col)
            size = int(m.group(2))
            if size < 1:
                raise QasmError("qreg must have at least one qubit", line, col)
            reg = (m.group(1), size)
            continue
        name, param, args = _split_call(stmt, line, col)
        if name in _UNSUPPORTED:
            raise QasmError(f"{_UNSUPPORTED[name]} are not supported", line, col)
        if name not in _GATES:
            raise QasmError(f"unsupported gate {name!r}", line, col)
        if reg is None:
            raise QasmError(f"gate {name!r} before qreg declaration", line, col)
        kind = _GATES[name]
        if (param is not None) != (kind is GateKind.RZ):
            raise QasmError(f"gate {name!r} has wrong parameter list", line, col)
        qubits = []
        for arg in args.split(","):
            am = _ARG.match(arg.strip())
            if not am:
                raise QasmError(f"bad qubit argument {arg.strip()!r}", line, col)
            if am.group(1) != reg[0]:
                raise QasmError(f"unknown register {am.group(1)!r}", line, col)
            q = int(am.group(2))
            if q >= reg[1]:
                raise QasmError(f"qubit index {q} out of range for {reg[0]}[{reg[1]}]", line, col)
            qubits.append(q)
        if len(qubits) != kind.arity:
            raise QasmError(f"{name} takes {kind.arity} qubit(s), got {len(qubits)}", line, col)
        if len(set(qubits)) != len(qubits):
            raise QasmError(f"{name} applied twice to the same qubit", line, col)
        angle = _eval_angle(param, line, col) if param is not None else None
        gates.append(Gate(kind, tuple(qubits), angle))
    if not header_seen:
        raise QasmError("empty input: expected 'OPENQASM 2.0;' header", 1, 1)
    if reg is None:
        raise QasmError("no qreg declared", 1, 1)
    return Circuit.from_gates(reg[1], gates)


def print_qasm(c: Circuit) -> str:
    """Emit layers left to right, gates within a layer by ascending lowest qubit."""
    out = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{c.num_qubits}];"]
    for layer in c:
        out.extend(g.qasm() + ";" for g in layer)
    return "\n".join(out) + "\n"


def read_qasm(path: str) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        return parse_qasm(fh.read())


def write_qasm(c: Circuit, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(print_qasm(c))
