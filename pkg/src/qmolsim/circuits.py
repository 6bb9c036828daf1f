"""Circuits and the Pauli-exponential circuit builder."""
from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

from .gates import Gate, make_gate
from .paulis import PauliString


class Circuit:
    """An ordered product of gates; the leftmost stored gate acts first."""

    __slots__ = ("gates",)

    def __init__(self, gates: Iterable[Gate] = ()):
        self.gates: list[Gate] = list(gates)

    def add(self, gate: Gate) -> "Circuit":
        self.gates.append(gate)
        return self

    def extend(self, other: "Circuit") -> "Circuit":
        self.gates.extend(other.gates)
        return self

    def adjoint(self) -> "Circuit":
        return Circuit(g.adjoint() for g in reversed(self.gates))

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __eq__(self, other) -> bool:
        return isinstance(other, Circuit) and self.gates == other.gates

    def n_cnot(self) -> int:
        return sum(1 for g in self.gates if g.kind == "CNOT")

    def max_qubit(self) -> int:
        return max((g.max_qubit() for g in self.gates), default=-1)

    def __str__(self) -> str:
        return "\n".join(str(g) for g in self.gates)


def exponentiate_pauli_string(
    factor: complex, string: PauliString
) -> tuple[Circuit, complex]:
    """Circuit for exp(factor * P) with purely imaginary factor.

    Layout: X factors are conjugated by H, Y factors by Rx(+pi/2)/Rx(-pi/2),
    then a CNOT ladder ascends the participating qubits to the highest one,
    which receives Rz(-2*Im(factor)); the ladder and basis changes are then
    mirrored. An identity string yields an empty circuit and global phase
    exp(factor); all other strings carry global phase exactly 1.
    """
    if abs(factor.real) > 1e-14:
        raise ValueError("exponential factor must be purely imaginary (i*theta)")
    theta = factor.imag
    if string.is_identity:
        return Circuit(), complex(np.exp(factor))

    qubits = [q for q, _ in string.factors()]
    basis_in = Circuit()
    basis_out = Circuit()
    for q, axis in string.factors():
        if axis == "X":
            basis_in.add(make_gate("H", q))
            basis_out.add(make_gate("H", q))
        elif axis == "Y":
            basis_in.add(make_gate("Rx", q, parameter=np.pi / 2))
            basis_out.add(make_gate("Rx", q, parameter=-np.pi / 2))

    ladder = Circuit()
    for a, b in zip(qubits, qubits[1:]):
        ladder.add(make_gate("CNOT", b, a))

    circ = Circuit()
    circ.extend(basis_in)
    circ.extend(ladder)
    circ.add(make_gate("Rz", qubits[-1], parameter=-2.0 * theta))
    circ.extend(ladder.adjoint())
    circ.extend(basis_out)
    return circ, 1.0 + 0.0j


def pauli_exponential_cnot_count(string: PauliString) -> int:
    """Structural CNOT count of the exponential circuit: 2*(weight-1)."""
    k = string.weight
    return 0 if k == 0 else 2 * (k - 1)
