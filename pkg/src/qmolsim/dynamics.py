"""Real-time evolution circuits and matrix-element estimation.

Trotterized evolution exponentiates each Hamiltonian term with the standard
Pauli-exponential circuit; the identity term is carried as a global phase
(observable under control, so the controlled variant turns it into an
ancilla phase gate). Exact evolution acts on the state vector through the
spectral decomposition of the dense Hamiltonian (oracle scale).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .circuits import Circuit, exponentiate_pauli_string
from .computer import StateVector
from .gates import make_gate
from .paulis import PauliString, QubitOperator, qubit_operator_matrix

EXACT_EVOLUTION_MAX_QUBITS = 12


@dataclass
class EvolutionSpec:
    """Parameters of one real-time evolution e^{-i t H}."""

    time: float
    trotter_steps: int = 1
    ordering: str = "magnitude"  # or "canonical"
    exact: bool = False

    def __post_init__(self):
        if not self.exact and self.trotter_steps < 1:
            raise ValueError("trotter_steps must be >= 1")


def ordered_terms(h: QubitOperator, ordering: str) -> list[tuple[complex, PauliString]]:
    """Non-identity terms in the fixed application order."""
    terms = [(c, s) for c, s in h if not s.is_identity]
    if ordering == "magnitude":
        terms.sort(key=lambda t: (-abs(t[0]), t[1]))
    elif ordering == "canonical":
        terms.sort(key=lambda t: t[1])
    else:
        raise ValueError(f"unknown term ordering '{ordering}'")
    return terms


def trotter_circuit(h: QubitOperator, spec: EvolutionSpec) -> tuple[Circuit, complex]:
    """First-order Trotter circuit for e^{-i t H}: (prod_l e^{-i t h_l P_l / r})^r.

    Returns (circuit, global_phase); the phase carries the identity term
    e^{-i t h_I}.
    """
    if not h.is_hermitian():
        raise ValueError("Trotter evolution requires a Hermitian operator")
    if spec.exact:
        raise ValueError("trotter_circuit called with spec.exact=True")
    terms = ordered_terms(h, spec.ordering)
    dt = spec.time / spec.trotter_steps
    step = Circuit()
    for coeff, string in terms:
        sub, _ = exponentiate_pauli_string(-1j * dt * coeff.real, string)
        step.extend(sub)
    circuit = Circuit()
    for _ in range(spec.trotter_steps):
        circuit.extend(Circuit(step.gates))
    phase = np.exp(-1j * spec.time * h.identity_coefficient().real)
    return circuit, complex(phase)


def trotter_cnot_count(h: QubitOperator, spec: EvolutionSpec) -> int:
    """Structural CNOTs: sum of 2*(weight-1) per exponentiated string."""
    per_step = sum(
        2 * (s.weight - 1) for _, s in h if not s.is_identity and s.weight > 1
    )
    return per_step * spec.trotter_steps


def apply_trotter_evolution(
    state: StateVector, h: QubitOperator, spec: EvolutionSpec
) -> complex:
    """Fast path: apply the Trotterized evolution via Pauli rotations.

    Mathematically identical to applying trotter_circuit's gates (each
    exponential acts as cos + i sin * P); the identity phase is multiplied
    into the amplitudes so the state equals circuit-times-phase. Returns the
    phase that was applied.
    """
    terms = ordered_terms(h, spec.ordering)
    dt = spec.time / spec.trotter_steps
    for _ in range(spec.trotter_steps):
        for coeff, string in terms:
            state.apply_pauli_rotation(string, -dt * coeff.real)
    phase = complex(np.exp(-1j * spec.time * h.identity_coefficient().real))
    state.amplitudes *= phase
    return phase


def exact_evolve(h: QubitOperator, t: float, state: StateVector) -> None:
    """state <- exp(-i t H) state through the dense spectral decomposition."""
    if state.n_qubits > EXACT_EVOLUTION_MAX_QUBITS:
        raise ValueError("exact evolution limited to 12 qubits")
    mat = qubit_operator_matrix(h, state.n_qubits)
    vals, vecs = np.linalg.eigh(mat)
    coeffs = vecs.conj().T @ state.amplitudes
    state.amplitudes = vecs @ (np.exp(-1j * t * vals) * coeffs)


def controlled_exact_evolve(
    h: QubitOperator, t: float, state: StateVector, ancilla: int, n_system: int
) -> None:
    """Apply exp(-i t H) on the system qubits where the ancilla bit is 1.

    The system register occupies qubits 0..n_system-1; the ancilla must lie
    above it.
    """
    if ancilla < n_system:
        raise ValueError("ancilla must sit above the system register")
    mat = qubit_operator_matrix(h, n_system)
    vals, vecs = np.linalg.eigh(mat)
    u = vecs @ (np.exp(-1j * t * vals)[:, None] * vecs.conj().T)
    dim_sys = 1 << n_system
    view = state.amplitudes.reshape(-1, dim_sys)
    rows = (np.arange(view.shape[0]) >> (ancilla - n_system)) & 1 == 1
    view[rows, :] = view[rows, :] @ u.T


def controlled_evolution_circuit(
    h: QubitOperator, spec: EvolutionSpec, ancilla: int
) -> Circuit:
    """Trotter circuit with every Rz promoted to its controlled version.

    Controlled-Rz(theta) is realized as R(-theta/2) on the ancilla followed
    by CR(theta) between ancilla and target; the identity term becomes a
    plain ancilla phase gate R(-t*h_I). Basis changes and CNOT ladders cancel
    on their own when the ancilla is |0>, so they stay uncontrolled.
    """
    if not h.is_hermitian():
        raise ValueError("controlled evolution requires a Hermitian operator")
    if ancilla <= h.max_qubit():
        raise ValueError("ancilla collides with system qubits")
    terms = ordered_terms(h, spec.ordering)
    dt = spec.time / spec.trotter_steps
    step = Circuit()
    for coeff, string in terms:
        sub, _ = exponentiate_pauli_string(-1j * dt * coeff.real, string)
        for gate in sub:
            if gate.kind == "Rz":
                step.add(make_gate("R", ancilla, parameter=-0.5 * gate.parameter))
                step.add(make_gate("CR", gate.target, ancilla, gate.parameter))
            else:
                step.add(gate)
    circuit = Circuit()
    for _ in range(spec.trotter_steps):
        circuit.extend(Circuit(step.gates))
    identity_angle = -spec.time * h.identity_coefficient().real
    if abs(identity_angle) > 0.0:
        circuit.add(make_gate("R", ancilla, parameter=identity_angle))
    return circuit


def controlled_pauli_circuit(string: PauliString, ancilla: int) -> Circuit:
    """Apply a Pauli string on the system conditioned on the ancilla.

    X -> CNOT, Z -> CZ, Y -> S . CNOT . Sdg (all controlled by the ancilla).
    """
    circ = Circuit()
    for q, axis in string.factors():
        if axis == "X":
            circ.add(make_gate("CNOT", q, ancilla))
        elif axis == "Z":
            circ.add(make_gate("CZ", q, ancilla))
        else:  # Y = S X Sdg
            circ.add(make_gate("Sdg", q))
            circ.add(make_gate("CNOT", q, ancilla))
            circ.add(make_gate("S", q))
    return circ


def controlled_x_string(reference: Circuit, ancilla: int) -> Circuit:
    """Promote an X-gate-only preparation circuit to its controlled version."""
    circ = Circuit()
    for gate in reference:
        if gate.kind != "X":
            raise ValueError("controlled preparation supports X-gate circuits only")
        circ.add(make_gate("CNOT", gate.target, ancilla))
    return circ


@dataclass
class EvolvedPrep:
    """A state preparation: reference circuit then Trotterized evolution.

    The unitary is [Trotter(e^{-i time H}, trotter_steps)]^repetitions, so a
    composed n-step walk uses (time=dt, repetitions=n) while a single fresh
    circuit for the full time uses (time=n*dt, repetitions=1).
    """

    reference: Circuit
    hamiltonian: QubitOperator | None = None
    time: float = 0.0
    trotter_steps: int = 1
    ordering: str = "magnitude"
    repetitions: int = 1

    def spec(self) -> EvolutionSpec:
        return EvolutionSpec(self.time, self.trotter_steps, self.ordering)

    def prepare(self, n_qubits: int) -> tuple[StateVector, complex]:
        state = StateVector(n_qubits)
        state.apply_circuit(self.reference)
        phase = 1.0 + 0.0j
        if self.hamiltonian is not None and self.time != 0.0:
            for _ in range(self.repetitions):
                phase *= apply_trotter_evolution(state, self.hamiltonian, self.spec())
        return state, phase


def _hadamard_test(circ_builder, n_qubits: int) -> complex:
    """Exact <X_a> + i <Y_a> readout of an ancilla interference circuit."""
    ancilla = n_qubits
    state = StateVector(n_qubits + 1)
    state.apply_gate(make_gate("H", ancilla))
    circ_builder(state, ancilla)
    x_anc = state.expectation(QubitOperator.from_factors(1.0, [(ancilla, "X")]))
    y_anc = state.expectation(QubitOperator.from_factors(1.0, [(ancilla, "Y")]))
    return complex(x_anc.real + 1j * y_anc.real)


def _hadamard_transition(
    bra: EvolvedPrep, ket: EvolvedPrep, string: PauliString | None, n_qubits: int
) -> complex:
    """<0| V |0> with V = bra_prep^dag . P . ket_prep via one Hadamard test."""

    def build(state: StateVector, ancilla: int) -> None:
        ket_circ = controlled_x_string(ket.reference, ancilla)
        if ket.hamiltonian is not None and ket.time != 0.0:
            step = controlled_evolution_circuit(ket.hamiltonian, ket.spec(), ancilla)
            for _ in range(ket.repetitions):
                ket_circ.extend(step)
        bra_circ = controlled_x_string(bra.reference, ancilla)
        if bra.hamiltonian is not None and bra.time != 0.0:
            step = controlled_evolution_circuit(bra.hamiltonian, bra.spec(), ancilla)
            for _ in range(bra.repetitions):
                bra_circ.extend(step)
        state.apply_circuit(ket_circ)
        if string is not None and not string.is_identity:
            state.apply_circuit(controlled_pauli_circuit(string, ancilla))
        state.apply_circuit(bra_circ.adjoint())

    return _hadamard_test(build, n_qubits)


def matrix_element(
    bra_prep: Circuit | EvolvedPrep,
    ket_prep: Circuit | EvolvedPrep,
    h: QubitOperator | None = None,
    method: str = "direct",
    n_qubits: int | None = None,
) -> complex:
    """<Phi_bra| O |Phi_ket> with O = identity when h is absent.

    'direct' computes state-vector inner products for any preparations.
    'hadamard-test' assembles ancilla interference circuits and reads exact
    ancilla expectations; it requires EvolvedPrep inputs (X-gate reference
    plus optional Trotterized evolution), whose structure makes every piece
    controllable.
    """
    if n_qubits is None:
        candidates = []
        for prep in (bra_prep, ket_prep):
            circ = prep.reference if isinstance(prep, EvolvedPrep) else prep
            candidates.append(circ.max_qubit() + 1)
            if isinstance(prep, EvolvedPrep) and prep.hamiltonian is not None:
                candidates.append(prep.hamiltonian.max_qubit() + 1)
        if h is not None:
            candidates.append(h.max_qubit() + 1)
        n_qubits = max(max(candidates), 1)

    if method == "direct":
        def states(prep):
            if isinstance(prep, EvolvedPrep):
                return prep.prepare(n_qubits)
            sv = StateVector(n_qubits)
            sv.apply_circuit(prep)
            return sv, 1.0 + 0.0j

        bra_state, bra_phase = states(bra_prep)
        ket_state, ket_phase = states(ket_prep)
        if h is not None:
            ket_state.apply_operator(h)
        return complex(bra_state.inner_product(ket_state))

    if method == "hadamard-test":
        if not isinstance(bra_prep, EvolvedPrep) or not isinstance(ket_prep, EvolvedPrep):
            raise TypeError("hadamard-test needs EvolvedPrep inputs")
        if h is None:
            return _hadamard_transition(bra_prep, ket_prep, None, n_qubits)
        total = 0.0 + 0.0j
        for coeff, string in h:
            total += coeff * _hadamard_transition(bra_prep, ket_prep, string, n_qubits)
        return complex(total)

    raise ValueError(f"unknown matrix-element method '{method}'")
