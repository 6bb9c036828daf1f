"""Time evolution: Trotter circuits, exact propagation, matrix elements."""
import numpy as np
import pytest

from qmolsim.circuits import Circuit
from qmolsim.computer import StateVector, new_computer
from qmolsim.dynamics import (
    EvolutionSpec,
    EvolvedPrep,
    apply_trotter_evolution,
    controlled_evolution_circuit,
    controlled_exact_evolve,
    exact_evolve,
    matrix_element,
    trotter_circuit,
    trotter_cnot_count,
)
from qmolsim.gates import make_gate
from qmolsim.paulis import PauliString, QubitOperator, qubit_operator_matrix
from qmolsim.system import reference_circuit

from conftest import hermitian_expm


def random_hermitian_operator(rng, n_qubits, n_terms):
    terms = []
    for _ in range(n_terms):
        factors = []
        for q in range(n_qubits):
            axis = "IXYZ"[rng.integers(4)]
            if axis != "I":
                factors.append((q, axis))
        terms.append((float(rng.normal()), PauliString.from_factors(factors)))
    return QubitOperator(terms)


def evolve_exact_vector(h, t, amps, n_qubits):
    u = hermitian_expm(qubit_operator_matrix(h, n_qubits), -1j * t)
    return u @ amps


class TestTrotterCircuit:
    def test_single_term_is_exact(self):
        h = QubitOperator.from_factors(0.7, [(0, "Z")])
        for r in (1, 3):
            circ, phase = trotter_circuit(h, EvolutionSpec(1.3, r))
            qc = new_computer(1)
            qc.apply_gate(make_gate("H", 0))
            start = qc.amplitudes.copy()
            qc.apply_circuit(circ)
            qc.amplitudes *= phase
            expected = evolve_exact_vector(h, 1.3, start, 1)
            assert np.abs(qc.amplitudes - expected).max() < 1e-14

    def test_first_order_error_scaling(self):
        h = QubitOperator.from_factors(1.0, [(0, "X")]) + QubitOperator.from_factors(
            1.0, [(0, "Z")]
        )
        errors = []
        for r in (1, 2, 4, 8):
            qc = new_computer(1)
            apply_trotter_evolution(qc, h, EvolutionSpec(1.0, r))
            expected = evolve_exact_vector(h, 1.0, np.array([1.0, 0j]), 1)
            errors.append(np.linalg.norm(qc.amplitudes - expected))
        assert all(b <= a + 1e-12 for a, b in zip(errors, errors[1:]))
        assert all(e * r < 2.0 * errors[0] for e, r in zip(errors, (1, 2, 4, 8)))

    def test_unitarity_on_h2(self, h2_system):
        circ, _ = trotter_circuit(h2_system.qubit_hamiltonian, EvolutionSpec(0.5, 1))
        qc = new_computer(4)
        qc.apply_circuit(reference_circuit(h2_system))
        qc.apply_circuit(circ)
        assert abs(qc.norm() - 1.0) < 1e-12

    def test_rejects_non_hermitian(self):
        h = QubitOperator.from_factors(1j, [(0, "X")])
        with pytest.raises(ValueError):
            trotter_circuit(h, EvolutionSpec(1.0, 1))

    def test_identity_term_rides_global_phase(self):
        h = QubitOperator.identity(2.0) + QubitOperator.from_factors(0.5, [(0, "Z")])
        circ, phase = trotter_circuit(h, EvolutionSpec(0.3, 1))
        assert phase == pytest.approx(np.exp(-1j * 0.3 * 2.0))
        assert all(g.kind != "R" for g in circ)

    def test_trotter_error_monotone_on_random_operators(self):
        rng = np.random.default_rng(20)
        for _ in range(5):
            h = random_hermitian_operator(rng, 4, 6)
            start = rng.normal(size=16) + 1j * rng.normal(size=16)
            start /= np.linalg.norm(start)
            expected = evolve_exact_vector(h, 0.8, start, 4)
            errors = []
            for r in (1, 2, 4, 8, 16):
                qc = StateVector(4)
                qc.set_amplitudes(start)
                apply_trotter_evolution(qc, h, EvolutionSpec(0.8, r))
                errors.append(np.linalg.norm(qc.amplitudes - expected))
            assert all(b <= a + 1e-12 for a, b in zip(errors, errors[1:]))

    def test_cnot_count(self, h4_system):
        per_step = sum(
            2 * (s.weight - 1)
            for _, s in h4_system.qubit_hamiltonian
            if not s.is_identity
        )
        assert per_step == 1328
        assert trotter_cnot_count(
            h4_system.qubit_hamiltonian, EvolutionSpec(0.5, 3)
        ) == 3 * per_step


class TestExactEvolve:
    def test_zero_time_is_identity(self, h2_system):
        qc = new_computer(4)
        qc.apply_circuit(reference_circuit(h2_system))
        before = qc.amplitudes.copy()
        exact_evolve(h2_system.qubit_hamiltonian, 0.0, qc)
        assert np.abs(qc.amplitudes - before).max() < 1e-14

    def test_eigenstate_accumulates_pure_phase(self):
        h = QubitOperator.from_factors(0.9, [(0, "Z")])
        qc = new_computer(1)
        exact_evolve(h, 1.7, qc)  # |0> is the +0.9 eigenstate
        assert qc.amplitudes[0] == pytest.approx(np.exp(-1j * 1.7 * 0.9))
        assert abs(qc.norm() - 1.0) < 1e-14

    def test_trotter_converges_to_exact(self, h2_system):
        h = h2_system.qubit_hamiltonian
        exact = new_computer(4)
        exact.apply_circuit(reference_circuit(h2_system))
        exact_evolve(h, 0.5, exact)
        trotterized = new_computer(4)
        trotterized.apply_circuit(reference_circuit(h2_system))
        apply_trotter_evolution(trotterized, h, EvolutionSpec(0.5, 64))
        overlap = abs(np.vdot(exact.amplitudes, trotterized.amplitudes))
        assert overlap >= 1.0 - 1e-6

    def test_energy_conserved(self, h2_system):
        h = h2_system.qubit_hamiltonian
        qc = new_computer(4)
        qc.apply_circuit(reference_circuit(h2_system))
        qc.apply_gate(make_gate("Ry", 2, parameter=0.4))
        before = qc.expectation(h).real
        exact_evolve(h, 2.5, qc)
        after = qc.expectation(h).real
        assert after == pytest.approx(before, abs=1e-10)


class TestControlledEvolution:
    def test_ancilla_zero_leaves_system_unchanged(self, h2_system):
        circ = controlled_evolution_circuit(
            h2_system.qubit_hamiltonian, EvolutionSpec(0.5, 1), ancilla=4
        )
        qc = new_computer(5)
        qc.apply_circuit(reference_circuit(h2_system))
        before = qc.amplitudes.copy()
        qc.apply_circuit(circ)
        assert np.abs(qc.amplitudes - before).max() < 1e-12

    def test_ancilla_one_reproduces_evolution_with_phase(self, h2_system):
        h = h2_system.qubit_hamiltonian
        spec = EvolutionSpec(0.5, 2)
        circ = controlled_evolution_circuit(h, spec, ancilla=4)
        qc = new_computer(5)
        qc.apply_gate(make_gate("X", 4))
        qc.apply_circuit(reference_circuit(h2_system))
        qc.apply_circuit(circ)

        twin = new_computer(4)
        twin.apply_circuit(reference_circuit(h2_system))
        apply_trotter_evolution(twin, h, spec)  # fast path, includes phase
        # ancilla=1 block of qc equals the evolved system state
        block = qc.amplitudes.reshape(2, 16)[1]
        assert np.abs(block - twin.amplitudes).max() < 1e-12

    def test_ancilla_collision_rejected(self, h2_system):
        with pytest.raises(ValueError):
            controlled_evolution_circuit(
                h2_system.qubit_hamiltonian, EvolutionSpec(0.5, 1), ancilla=2
            )

    def test_controlled_exact_evolve_matches_exact(self, h2_system):
        h = h2_system.qubit_hamiltonian
        qc = new_computer(5)
        qc.apply_gate(make_gate("H", 4))
        qc.apply_circuit(reference_circuit(h2_system))
        controlled_exact_evolve(h, 0.7, qc, ancilla=4, n_system=4)
        twin = new_computer(4)
        twin.apply_circuit(reference_circuit(h2_system))
        exact_evolve(h, 0.7, twin)
        blocks = qc.amplitudes.reshape(2, 16)
        ref = new_computer(4)
        ref.apply_circuit(reference_circuit(h2_system))
        assert np.abs(np.sqrt(2) * blocks[0] - ref.amplitudes).max() < 1e-12
        assert np.abs(np.sqrt(2) * blocks[1] - twin.amplitudes).max() < 1e-12


class TestMatrixElement:
    def test_identical_preparations_overlap_one(self, h2_system):
        prep = reference_circuit(h2_system)
        value = matrix_element(prep, prep, n_qubits=4)
        assert value == pytest.approx(1.0)

    def test_orthogonal_preparations(self):
        bra = Circuit([make_gate("X", 0)])
        ket = Circuit([make_gate("X", 1)])
        assert matrix_element(bra, ket, n_qubits=2) == pytest.approx(0.0)

    def test_hadamard_test_matches_direct_overlap(self, h2_system):
        h = h2_system.qubit_hamiltonian
        ref = reference_circuit(h2_system)
        bra = EvolvedPrep(ref)
        ket = EvolvedPrep(ref, h, 0.5, 1)
        direct = matrix_element(bra, ket, method="direct", n_qubits=4)
        tested = matrix_element(bra, ket, method="hadamard-test", n_qubits=4)
        assert tested == pytest.approx(direct, abs=1e-10)

    def test_hadamard_test_hamiltonian_element(self, h2_system):
        h = h2_system.qubit_hamiltonian
        ref = reference_circuit(h2_system)
        bra = EvolvedPrep(ref, h, 0.5, 1)
        ket = EvolvedPrep(ref, h, 1.0, 1)
        direct = matrix_element(bra, ket, h, method="direct", n_qubits=4)
        tested = matrix_element(bra, ket, h, method="hadamard-test", n_qubits=4)
        assert tested == pytest.approx(direct, abs=1e-10)

    def test_width_mismatch_is_error(self):
        bra = Circuit([make_gate("X", 0)])
        ket = Circuit([make_gate("X", 3)])
        # widths are reconciled by the register size; a bad register errors
        with pytest.raises(IndexError):
            matrix_element(bra, ket, n_qubits=2)
