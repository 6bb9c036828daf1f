"""Quantum gate definitions.

A gate is a small immutable record: a kind, a target qubit, an optional
control qubit, and an optional real parameter (angle in radians). The unitary
matrix is derived from these fields. Two-qubit matrices are expressed in the
(control, target) bit order, i.e. row/column index = 2*control_bit + target_bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SQRT1_2 = 1.0 / math.sqrt(2.0)

# Single-qubit gates without parameters.
_FIXED_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[SQRT1_2, SQRT1_2], [SQRT1_2, -SQRT1_2]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "Sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
    "T": np.array([[1, 0], [0, (1 + 1j) * SQRT1_2]], dtype=complex),
    "Tdg": np.array([[1, 0], [0, (1 - 1j) * SQRT1_2]], dtype=complex),
    "V": 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex),
    "Vdg": 0.5 * np.array([[1 - 1j, 1 + 1j], [1 + 1j, 1 - 1j]], dtype=complex),
}

# Single-qubit gates with one angle.
_PARAM_1Q = {"Rx", "Ry", "Rz", "R"}

# Two-qubit gates (control, target); CR carries one angle.
_FIXED_2Q = {
    "CNOT": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "SWAP": np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    ),
}
_PARAM_2Q = {"CR"}

PARAMETRIC_KINDS = _PARAM_1Q | _PARAM_2Q
TWO_QUBIT_KINDS = set(_FIXED_2Q) | _PARAM_2Q
GATE_KINDS = set(_FIXED_1Q) | _PARAM_1Q | TWO_QUBIT_KINDS

# Adjoint of a non-parametric kind; parametric kinds negate their angle.
_ADJOINT = {
    "I": "I", "X": "X", "Y": "Y", "Z": "Z", "H": "H",
    "S": "Sdg", "Sdg": "S", "T": "Tdg", "Tdg": "T",
    "V": "Vdg", "Vdg": "V",
    "CNOT": "CNOT", "CZ": "CZ", "SWAP": "SWAP",
}


class GateError(ValueError):
    """Raised for malformed gate construction or application."""


def _param_matrix(kind: str, theta: float) -> np.ndarray:
    c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
    if kind == "Rx":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if kind == "Ry":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == "Rz":
        return np.array([[c - 1j * s, 0], [0, c + 1j * s]])
    if kind == "R":
        return np.array([[1, 0], [0, np.exp(1j * theta)]])
    if kind == "CR":
        m = np.eye(4, dtype=complex)
        m[3, 3] = np.exp(1j * theta)
        return m
    raise GateError(f"unknown parametric gate kind '{kind}'")


@dataclass(frozen=True)
class Gate:
    """One quantum gate: kind, target, optional control, optional angle."""

    kind: str
    target: int
    control: int | None = None
    parameter: float | None = None

    @property
    def matrix(self) -> np.ndarray:
        """The 2x2 (or 4x4, in (control, target) bit order) unitary."""
        if self.parameter is not None:
            return _param_matrix(self.kind, self.parameter)
        if self.kind in _FIXED_1Q:
            return _FIXED_1Q[self.kind]
        return _FIXED_2Q[self.kind]

    @property
    def is_two_qubit(self) -> bool:
        return self.kind in TWO_QUBIT_KINDS

    def max_qubit(self) -> int:
        return self.target if self.control is None else max(self.target, self.control)

    def adjoint(self) -> "Gate":
        if self.parameter is not None:
            return Gate(self.kind, self.target, self.control, -self.parameter)
        return Gate(_ADJOINT[self.kind], self.target, self.control)

    def __str__(self) -> str:
        name = self.kind
        if self.parameter is not None:
            name += f"({self.parameter:.12g})"
        if self.control is not None:
            return f"{name} {self.target} {self.control}"
        return f"{name} {self.target}"


def make_gate(
    kind: str,
    target: int,
    control: int | None = None,
    parameter: float | None = None,
) -> Gate:
    """Build a gate, validating kind, indices and parameter arity.

    Convention: ``make_gate('CNOT', t, c)`` flips qubit ``t`` when qubit ``c``
    is 1.
    """
    if kind not in GATE_KINDS:
        raise GateError(f"unknown gate kind '{kind}'")
    if target < 0 or (control is not None and control < 0):
        raise GateError("qubit indices must be non-negative")
    two_qubit = kind in TWO_QUBIT_KINDS
    if two_qubit:
        if control is None:
            raise GateError(f"gate '{kind}' requires a control/second qubit")
        if control == target:
            raise GateError(f"gate '{kind}': control equals target ({target})")
    elif control is not None:
        raise GateError(f"gate '{kind}' takes no control qubit")
    if kind in PARAMETRIC_KINDS:
        if parameter is None:
            raise GateError(f"gate '{kind}' requires an angle parameter")
    elif parameter is not None:
        raise GateError(f"gate '{kind}' takes no parameter")
    return Gate(kind, target, control, parameter)
