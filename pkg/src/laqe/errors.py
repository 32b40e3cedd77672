"""Exception hierarchy shared by every laqe module."""

from __future__ import annotations


class LaqeError(Exception):
    """Base class for all errors raised by laqe."""


class CircuitError(LaqeError, ValueError):
    """A circuit or gate violates a well-formedness rule."""


class QasmError(LaqeError, ValueError):
    """Malformed or unsupported OpenQASM input."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class OracleError(LaqeError):
    """An oracle failed to produce an answer (crash, timeout, garbage output)."""

    def __init__(self, message: str, stderr: str = ""):
        self.stderr = stderr
        if stderr:
            excerpt = stderr.strip()[-500:]
            message = f"{message}\n--- oracle stderr (tail) ---\n{excerpt}"
        super().__init__(message)


class OracleContractError(LaqeError):
    """An oracle broke the cost or shape contract the optimizer relies on."""


class RoundLimitError(OracleContractError):
    """OAC did not converge within the configured round cap."""


class VerificationInfeasible(LaqeError):
    """The requested check cannot run, e.g. too many qubits for dense simulation."""
