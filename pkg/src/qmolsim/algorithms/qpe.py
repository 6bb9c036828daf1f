"""Textbook quantum phase estimation with one ancilla register."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..circuits import Circuit
from ..computer import StateVector
from ..dynamics import (
    EvolutionSpec,
    controlled_evolution_circuit,
    controlled_exact_evolve,
    trotter_cnot_count,
)
from ..gates import make_gate
from ..paulis import QubitOperator
from ..system import MolecularSystem
from .common import AlgorithmError, PauliEvalCounter, ResourceReport


def qft_circuit(qubits: list[int]) -> Circuit:
    """QFT on the given qubits, qubits[0] least significant; includes the
    final order-reversing SWAPs."""
    circ = Circuit()
    k = len(qubits)
    for i in reversed(range(k)):
        circ.add(make_gate("H", qubits[i]))
        for j in reversed(range(i)):
            angle = np.pi / (1 << (i - j))
            circ.add(make_gate("CR", qubits[i], qubits[j], angle))
    for i in range(k // 2):
        circ.add(make_gate("SWAP", qubits[i], qubits[k - 1 - i]))
    return circ


@dataclass
class QpeResult:
    counts: dict[int, int]          # ancilla readout m -> shots
    energy: float                   # modal readout converted to energy
    phases: dict[int, float]        # readout -> energy mapping for all seen m
    report: ResourceReport


def run_qpe(
    hamiltonian: QubitOperator,
    n_system: int,
    reference: Circuit,
    n_ancilla: int = 8,
    t: float = 1.0,
    trotter_steps: int = 1,
    shots: int = 1000,
    seed: int = 23,
    exact_evolution: bool = False,
) -> QpeResult:
    """Sample the binary eigenphase readout of e^{-i t H}.

    Ancilla j (register qubits n_system + j) controls U^(2^j); after the
    inverse QFT the register holds m with m/2^n_anc ~ -tE/2pi, so a readout
    m converts to E = -2pi m / (2^n_anc t). The caller picks t to avoid
    phase wraparound (t < pi/|E_min| is safe).
    """
    if n_ancilla < 1:
        raise AlgorithmError("QPE needs at least one ancilla")
    if shots < 1:
        raise AlgorithmError("QPE readout needs shots >= 1")
    n_total = n_system + n_ancilla
    state = StateVector(n_total)
    state.apply_circuit(reference)
    ancillas = list(range(n_system, n_total))
    for a in ancillas:
        state.apply_gate(make_gate("H", a))

    n_cnot = 0
    for j, ancilla in enumerate(ancillas):
        if exact_evolution:
            controlled_exact_evolve(
                hamiltonian, t * (1 << j), state, ancilla, n_system
            )
        else:
            spec = EvolutionSpec(t, trotter_steps)
            circuit = controlled_evolution_circuit(hamiltonian, spec, ancilla)
            for _ in range(1 << j):
                state.apply_circuit(circuit)
            n_cnot += (1 << j) * trotter_cnot_count(hamiltonian, spec)

    state.apply_circuit(qft_circuit(ancillas).adjoint())

    probs = state.probabilities().reshape(1 << n_ancilla, 1 << n_system).sum(axis=1)
    rng = np.random.Generator(np.random.PCG64(seed))
    outcomes = rng.choice(1 << n_ancilla, size=shots, p=probs / probs.sum())
    values, freq = np.unique(outcomes, return_counts=True)
    counts = {int(m): int(c) for m, c in zip(values, freq)}
    modal = int(values[np.argmax(freq)])

    def to_energy(m: int) -> float:
        return -2.0 * np.pi * m / ((1 << n_ancilla) * t)

    report = ResourceReport(
        n_parameters=n_ancilla,
        n_cnot=n_cnot,
        n_pauli_evaluations=shots,
        n_iterations=1,
        final_energy=to_energy(modal),
    )
    return QpeResult(
        counts=counts,
        energy=to_energy(modal),
        phases={m: to_energy(m) for m in counts},
        report=report,
    )


def run_qpe_system(
    system: MolecularSystem,
    n_ancilla: int = 8,
    t: float = 1.0,
    trotter_steps: int = 1,
    shots: int = 1000,
    seed: int = 23,
    exact_evolution: bool = False,
) -> QpeResult:
    from ..system import reference_circuit

    return run_qpe(
        system.qubit_hamiltonian,
        system.n_qubits,
        reference_circuit(system),
        n_ancilla=n_ancilla,
        t=t,
        trotter_steps=trotter_steps,
        shots=shots,
        seed=seed,
        exact_evolution=exact_evolution,
    )
