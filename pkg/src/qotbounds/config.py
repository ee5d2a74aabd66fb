"""Centralized numerical tolerances and the register size cap."""

import os
from dataclasses import dataclass

CAP_ENV_VAR = "QOTBOUNDS_MAX_QUBITS"


@dataclass(frozen=True)
class Tolerances:
    hermiticity: float = 1e-12
    pinv_cutoff: float = 1e-12
    trace: float = 1e-10
    positivity: float = 1e-10
    kraus_completeness: float = 1e-10
    support_mass: float = 1e-10
    diagonal: float = 1e-14
    lindblad_trace_drift: float = 1e-6


TOL = Tolerances()


def max_qubits() -> int:
    """Largest register (in qubits) the dense simulator accepts.

    Defaults to 12 and can be overridden with the ``QOTBOUNDS_MAX_QUBITS``
    environment variable.
    """
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None:
        return 12
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{CAP_ENV_VAR} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"{CAP_ENV_VAR} must be positive, got {value}")
    return value


def max_dim() -> int:
    return 2 ** max_qubits()
