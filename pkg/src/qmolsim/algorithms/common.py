"""Shared machinery for the quantum algorithms: ansatz synthesis, resource
accounting, result records."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..circuits import Circuit, exponentiate_pauli_string
from ..computer import StateVector
from ..paulis import QubitOperator
from ..system import MolecularSystem, OperatorPool


class AlgorithmError(RuntimeError):
    """An algorithm failed to converge or hit an invalid configuration."""


@dataclass
class PauliEvalCounter:
    """Cumulative Pauli-string expectation evaluations, split by purpose."""

    energy: int = 0
    gradient: int = 0

    @property
    def total(self) -> int:
        return self.energy + self.gradient


@dataclass
class ResourceReport:
    n_parameters: int = 0
    n_cnot: int = 0
    n_pauli_evaluations: int = 0
    n_iterations: int = 0
    final_energy: float = 0.0
    n_pauli_evaluations_energy: int = 0
    n_pauli_evaluations_gradient: int = 0

    def as_dict(self) -> dict:
        return {
            "n_parameters": self.n_parameters,
            "n_cnot": self.n_cnot,
            "n_pauli_evaluations": self.n_pauli_evaluations,
            "n_iterations": self.n_iterations,
            "final_energy": self.final_energy,
            "n_pauli_evaluations_energy": self.n_pauli_evaluations_energy,
            "n_pauli_evaluations_gradient": self.n_pauli_evaluations_gradient,
        }


@dataclass
class AnsatzState:
    """A disentangled-UCC ansatz: ordered pool selections plus amplitudes."""

    pool: OperatorPool
    pool_indices: list[int]
    amplitudes: np.ndarray
    reference: int

    def __post_init__(self):
        if len(self.pool_indices) != len(self.amplitudes):
            raise ValueError("pool_indices and amplitudes must have equal length")

    @property
    def circuit(self) -> Circuit:
        """Deterministically regenerated circuit for the current amplitudes."""
        circ = Circuit()
        for idx, t in zip(self.pool_indices, self.amplitudes):
            for coeff, string in self.pool.jw_generator(idx):
                sub, _ = exponentiate_pauli_string(t * coeff, string)
                circ.extend(sub)
        return circ

    def n_cnot(self) -> int:
        total = 0
        for idx in self.pool_indices:
            for _, string in self.pool.jw_generator(idx):
                if string.weight > 1:
                    total += 2 * (string.weight - 1)
        return total


def set_determinant(state: StateVector, address: int) -> None:
    """Collapse a fresh register onto one computational-basis determinant."""
    state.amplitudes[:] = 0.0
    state.amplitudes[address] = 1.0


def apply_ansatz(
    state: StateVector,
    pool: OperatorPool,
    pool_indices: Sequence[int],
    amplitudes: Sequence[float],
) -> None:
    """Apply prod_mu exp(t_mu kappa_mu), first selection acting first.

    Each JW generator splits into mutually commuting Pauli strings with
    imaginary coefficients i*c, applied as rotations exp(i (t c) P); this is
    exactly the gate circuit's action.
    """
    for idx, t in zip(pool_indices, amplitudes):
        if t == 0.0:
            continue
        for coeff, string in pool.jw_generator(idx):
            state.apply_pauli_rotation(string, t * coeff.imag)


def prepare_ansatz_state(
    system: MolecularSystem,
    pool: OperatorPool,
    pool_indices: Sequence[int],
    amplitudes: Sequence[float],
) -> StateVector:
    state = StateVector(system.n_qubits)
    set_determinant(state, system.hf_reference)
    apply_ansatz(state, pool, pool_indices, amplitudes)
    return state


def energy_expectation(
    state: StateVector, hamiltonian: QubitOperator, counter: PauliEvalCounter,
    purpose: str = "energy",
) -> float:
    value = state.expectation(hamiltonian)
    if purpose == "energy":
        counter.energy += hamiltonian.n_pauli_strings()
    else:
        counter.gradient += hamiltonian.n_pauli_strings()
    return float(value.real)
