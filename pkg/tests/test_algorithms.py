"""Algorithm-level behavior on H2/H4 fixtures, oracle-checked throughout."""
import dataclasses

import numpy as np
import pytest

from qmolsim.algorithms import (
    AlgorithmError,
    PauliEvalCounter,
    pool_gradients,
    run_adapt_vqe,
    run_mrsqk,
    run_pqe,
    run_qite,
    run_qk,
    run_qlanczos,
    run_qpe,
    run_spqe,
    run_vqe,
    spin_complete,
)
from qmolsim.algorithms.pqe import _residuals
from qmolsim.circuits import Circuit
from qmolsim.gates import make_gate
from qmolsim.paulis import QubitOperator, qubit_operator_matrix
from qmolsim.solvers import FD_STEP, fci_oracle
from qmolsim.system import build_pool


@pytest.fixture(scope="module")
def h2_fci(h2_system):
    return fci_oracle(h2_system.qubit_hamiltonian, 4, 2)[0]


class TestVqe:
    def test_h2_reaches_fci(self, h2_system, h2_fci):
        result = run_vqe(h2_system, "SD", tol=1e-8)
        assert result.energy == pytest.approx(h2_fci, abs=1e-8)

    def test_empty_pool_gives_hf(self, h2_system):
        from qmolsim.system import OperatorPool

        result = run_vqe(h2_system, pool=OperatorPool([], "empty"))
        assert result.energy == pytest.approx(h2_system.hf_energy(), abs=1e-12)
        assert result.report.n_parameters == 0

    def test_h4_resource_counts(self, h4_system):
        pool = build_pool(h4_system, "SD")
        assert len(pool) == 14
        from qmolsim.algorithms.common import AnsatzState

        ansatz = AnsatzState(pool, list(range(14)), np.zeros(14), h4_system.hf_reference)
        assert ansatz.n_cnot() == 736
        assert ansatz.circuit.n_cnot() == 736

    def test_h4_paired_doubles_counts(self, h4_system):
        from qmolsim.algorithms.common import AnsatzState

        pool = build_pool(h4_system, "pairedD")
        ansatz = AnsatzState(pool, list(range(len(pool))), np.zeros(len(pool)),
                             h4_system.hf_reference)
        assert len(pool) == 4
        assert ansatz.n_cnot() == 192

    def test_variational_bound(self, h2_system, h2_fci):
        result = run_vqe(h2_system, "SD", tol=1e-6)
        assert result.energy >= h2_fci - 1e-9

    def test_nelder_mead_optimizer_path(self, h2_system, h2_fci):
        result = run_vqe(h2_system, "SD", optimizer="nelder-mead", tol=1e-12,
                         max_iter=800)
        assert result.energy == pytest.approx(h2_fci, abs=1e-5)

    def test_counter_tags_energy_and_gradient(self, h2_system):
        result = run_vqe(h2_system, "SD", tol=1e-6)
        res = result.report
        assert res.n_pauli_evaluations == (
            res.n_pauli_evaluations_energy + res.n_pauli_evaluations_gradient
        )
        assert res.n_pauli_evaluations_energy % 15 == 0


class TestAdaptVqe:
    def test_huge_threshold_returns_hf(self, h2_system):
        result = run_adapt_vqe(h2_system, "SD", grad_norm_threshold=1e9)
        assert result.report.n_iterations == 0
        assert result.energy == pytest.approx(h2_system.hf_energy(), abs=1e-12)

    def test_h2_converges_within_three_macro_iterations(self, h2_system, h2_fci):
        result = run_adapt_vqe(h2_system, "SD", grad_norm_threshold=1e-7)
        assert result.report.n_iterations <= 3
        assert result.energy == pytest.approx(h2_fci, abs=1e-8)

    def test_gradient_matches_finite_difference(self, h2_system):
        from qmolsim.algorithms.common import prepare_ansatz_state, energy_expectation

        pool = build_pool(h2_system, "SD")
        counter = PauliEvalCounter()
        grads = pool_gradients(h2_system, pool, [], np.zeros(0), counter)
        for nu in range(len(pool)):
            def energy_at(t):
                state = prepare_ansatz_state(h2_system, pool, [nu], [t])
                return energy_expectation(state, h2_system.qubit_hamiltonian, counter)

            fd = (energy_at(FD_STEP) - energy_at(-FD_STEP)) / (2 * FD_STEP)
            assert grads[nu] == pytest.approx(fd, abs=1e-6)

    def test_argmax_invariant_under_hamiltonian_scaling(self, h2_system):
        pool = build_pool(h2_system, "SD")
        counter = PauliEvalCounter()
        grads = pool_gradients(h2_system, pool, [], np.zeros(0), counter)
        scaled_system = dataclasses.replace(
            h2_system, qubit_hamiltonian=h2_system.qubit_hamiltonian * 3.0
        )
        scaled = pool_gradients(scaled_system, pool, [], np.zeros(0), counter)
        assert np.allclose(scaled, 3.0 * grads, atol=1e-10)
        assert np.argmax(np.abs(scaled)) == np.argmax(np.abs(grads))


class TestPqe:
    def test_h2_matches_fci_and_vqe(self, h2_system, h2_fci):
        pqe = run_pqe(h2_system, "SD", residual_tol=1e-9)
        vqe = run_vqe(h2_system, "SD", tol=1e-8)
        assert pqe.energy == pytest.approx(h2_fci, abs=1e-8)
        assert pqe.energy == pytest.approx(vqe.energy, abs=1e-8)

    def test_initial_double_residual_equals_integral(self, h2_system):
        # r_mu(0) = <Phi_mu|H|Phi_0>: the antisymmetrized two-electron
        # integral <2 3||1 0>, which spin-reduces to the chemist (V O|V O)
        pool = build_pool(h2_system, "SD")
        counter = PauliEvalCounter()
        residuals, _ = _residuals(
            h2_system, pool, list(range(len(pool))), np.zeros(len(pool)), counter
        )
        double_pos = [k for k, e in enumerate(pool) if e.rank == 2][0]
        expected = h2_system.g_pqrs[1, 0, 1, 0]
        assert residuals[double_pos] == pytest.approx(expected, abs=1e-10)
        mat = qubit_operator_matrix(h2_system.qubit_hamiltonian, 4)
        assert residuals[double_pos] == pytest.approx(
            mat[0b1100, 0b0011].real, abs=1e-10
        )

    def test_singles_residuals_vanish_at_reference(self, h2_system):
        # Brillouin: canonical-orbital singles have zero residual at t = 0
        pool = build_pool(h2_system, "SD")
        counter = PauliEvalCounter()
        residuals, _ = _residuals(
            h2_system, pool, list(range(len(pool))), np.zeros(len(pool)), counter
        )
        for pos, entry in enumerate(pool):
            if entry.rank == 1:
                assert abs(residuals[pos]) < 1e-10

    def test_zero_denominator_rejected(self, h2_system):
        pool = build_pool(h2_system, "SD")
        broken = dataclasses.replace(pool[0], denominator=0.0)
        pool.entries[0] = broken
        with pytest.raises(AlgorithmError):
            run_pqe(h2_system, pool=pool)

    def test_diis_reaches_same_fixed_point(self, h2_system, h2_fci):
        result = run_pqe(h2_system, "SD", residual_tol=1e-9, diis=True)
        assert result.energy == pytest.approx(h2_fci, abs=1e-8)

    def test_divergence_aborts_with_report(self, h2_system, monkeypatch):
        # drive the guard directly: residual norms that grow every iteration
        # must abort after five consecutive increases
        import qmolsim.algorithms.pqe as pqe_module

        calls = {"count": 0}

        def growing_residuals(system, pool, indices, amplitudes, counter):
            calls["count"] += 1
            return np.full(len(indices), 0.1 * 2.0 ** calls["count"]), 0.0

        monkeypatch.setattr(pqe_module, "_residuals", growing_residuals)
        with pytest.raises(AlgorithmError, match="diverged"):
            run_pqe(h2_system, "SD", residual_tol=1e-12)
        assert calls["count"] == 6  # initial pass plus five growth checks


class TestSpqe:
    def test_omega_to_zero_recovers_fci(self, h2_system, h2_fci):
        result = run_spqe(h2_system, omega=1e-8, dt=0.001, residual_tol=1e-9)
        assert result.energy == pytest.approx(h2_fci, abs=1e-8)

    def test_huge_omega_keeps_hf(self, h2_system):
        result = run_spqe(h2_system, omega=1e6, dt=0.001)
        assert result.macro_iterations == 0
        assert result.energy == pytest.approx(h2_system.hf_energy(), abs=1e-12)
        assert result.report.n_parameters == 0

    def test_selected_operators_any_rank(self, h4_system):
        result = run_spqe(h4_system, omega=1e-8, dt=0.001, residual_tol=1e-7,
                          max_micro_iter=400)
        ranks = {entry.rank for entry in result.ansatz.pool}
        assert 4 in ranks  # quadruple excitations join without rank caps
        fci, _ = fci_oracle(h4_system.qubit_hamiltonian, 8, 4)
        assert result.energy == pytest.approx(fci, abs=1e-5)

    def test_sampled_selection_matches_exact(self, h4_system):
        # budget 3e-4 sits in a wide gap of the cumulative |r~|^2 profile,
        # far from the 1e5-shot sampling noise
        from qmolsim.algorithms.pqe import (
            residual_state_estimates,
            select_by_cumulative_threshold,
        )
        from qmolsim.system import OperatorPool

        def first_selection(shots):
            estimates = residual_state_estimates(
                h4_system, OperatorPool([], "x"), [], np.zeros(0),
                dt=0.5, trotter_steps=1, shots=shots, seed=5,
            )
            return set(
                select_by_cumulative_threshold(
                    estimates, h4_system.hf_reference, set(), budget=3e-4
                )
            )

        exact = first_selection(None)
        sampled = first_selection(100_000)
        assert exact == sampled


class TestQite:
    def test_initial_energy_is_hf(self, h2_system):
        result = run_qite(h2_system, dbeta=0.1, beta_max=0.1)
        assert result.energies[0] == pytest.approx(h2_system.hf_energy(), abs=1e-12)

    def test_h2_converges_monotonically(self, h2_system, h2_fci):
        result = run_qite(h2_system, dbeta=0.1, beta_max=10.0)
        assert result.final_energy == pytest.approx(h2_fci, abs=1e-4)
        diffs = np.diff(result.energies)
        assert np.all(diffs <= 1e-6)

    def test_small_step_matches_variance_identity(self, h2_system):
        dbeta = 1e-3
        result = run_qite(h2_system, dbeta=dbeta, beta_max=dbeta)
        h_mat = qubit_operator_matrix(h2_system.qubit_hamiltonian, 4)
        ref = np.zeros(16, dtype=complex)
        ref[h2_system.hf_reference] = 1.0
        e_hf = np.real(ref @ h_mat @ ref)
        variance = np.real(ref @ h_mat @ h_mat @ ref) - e_hf**2
        predicted = -2.0 * dbeta * variance
        observed = result.energies[1] - result.energies[0]
        assert abs(observed - predicted) <= 0.10 * abs(predicted)


class TestQlanczos:
    def test_single_vector_subspace(self, h2_system):
        qite_run = run_qite(h2_system, dbeta=0.1, beta_max=0.0)
        result = run_qlanczos(qite_run)
        assert result.report.n_parameters == 1
        assert result.ground_energy == pytest.approx(qite_run.final_energy, abs=1e-12)

    def test_diagonal_overlaps_are_one(self, h2_system):
        qite_run = run_qite(h2_system, dbeta=0.1, beta_max=2.0)
        result = run_qlanczos(qite_run)
        assert np.allclose(np.diag(result.s_matrix), 1.0, atol=1e-12)

    def test_subspace_variationality(self, h2_system, h2_fci):
        qite_run = run_qite(h2_system, dbeta=0.1, beta_max=5.0)
        result = run_qlanczos(qite_run)
        assert result.ground_energy <= qite_run.final_energy + 1e-10
        assert result.ground_energy == pytest.approx(h2_fci, abs=1e-4)

    def test_odd_gap_rejected(self, h2_system):
        qite_run = run_qite(h2_system, dbeta=0.1, beta_max=1.0)
        with pytest.raises(ValueError):
            run_qlanczos(qite_run, gap=3)


class TestQk:
    def test_s_zero_gives_hf(self, h2_system):
        result = run_qk(h2_system, s=0, dt=0.5)
        assert result.ground_energy == pytest.approx(h2_system.hf_energy(), abs=1e-12)

    def test_h2_subspace_recovers_fci(self, h2_system, h2_fci):
        result = run_qk(h2_system, s=3, dt=0.5)
        assert result.ground_energy == pytest.approx(h2_fci, abs=1e-9)

    def test_hadamard_and_direct_agree(self, h2_system):
        direct = run_qk(h2_system, s=2, dt=0.5, method="direct")
        tested = run_qk(h2_system, s=2, dt=0.5, method="hadamard-test")
        assert np.abs(direct.s_matrix - tested.s_matrix).max() < 1e-10
        assert np.abs(direct.h_matrix - tested.h_matrix).max() < 1e-10
        assert tested.ground_energy == pytest.approx(direct.ground_energy, abs=1e-10)

    def test_exact_evolution_toeplitz(self, h2_system):
        result = run_qk(h2_system, s=3, dt=0.5, exact_evolution=True)
        s = result.s_matrix
        for a in range(3):
            for b in range(3):
                assert abs(s[a, b] - s[a + 1, b + 1]) < 1e-12

    def test_h4_resources(self, h4_system):
        result = run_qk(h4_system, s=3, dt=0.5, trotter_steps=1)
        assert result.report.n_parameters == 4
        assert result.report.n_cnot == 2656
        assert result.report.n_pauli_evaluations == 2972

    def test_energy_non_increasing_with_s(self, h2_system):
        energies = [
            run_qk(h2_system, s=s, dt=0.5).ground_energy for s in (0, 1, 2, 3)
        ]
        retained = [run_qk(h2_system, s=s, dt=0.5).retained_dim for s in (0, 1, 2, 3)]
        for a, b, ra, rb in zip(energies, energies[1:], retained, retained[1:]):
            if rb >= ra:  # comparable only without trimming events
                assert b <= a + 1e-10


class TestMrsqk:
    def test_single_reference_reduces_to_qk(self, h2_system):
        qk = run_qk(h2_system, s=2, dt=0.5)
        mr = run_mrsqk(h2_system, d=1, s=2, dt=0.5)
        assert mr.ground_energy == pytest.approx(qk.ground_energy, abs=1e-12)

    def test_stretched_h4_improves_on_qk(self, h4_stretched):
        qk = run_qk(h4_stretched, s=2, dt=0.5)
        mr = run_mrsqk(h4_stretched, d=2, s=2, dt=0.5)
        assert mr.ground_energy < qk.ground_energy - 1e-10

    def test_spin_completion_family(self):
        # alpha at spatial 0, beta at spatial 1 (qubits: 0 and 3)
        det = 0b1001
        family = spin_complete(det, n_spatial=2)
        assert sorted(family) == [0b0110, 0b1001]

    def test_spin_completion_closed_shell_is_singleton(self):
        assert spin_complete(0b0011, 2) == [0b0011]

    def test_importance_error_when_too_few(self, h2_system):
        with pytest.raises(AlgorithmError):
            run_mrsqk(h2_system, d=200, s=1, dt=0.5)


class TestQpe:
    def test_exactly_representable_phase_reads_deterministically(self):
        # H = omega Z0, reference |1> has E = -omega; pick t so the phase
        # lands exactly on ancilla bin k
        n_anc, k, omega = 6, 5, 0.9
        t = 2 * np.pi * k / ((1 << n_anc) * omega)
        h = QubitOperator.from_factors(omega, [(0, "Z")])
        ref = Circuit([make_gate("X", 0)])
        result = run_qpe(h, 1, ref, n_ancilla=n_anc, t=t, shots=400, seed=3,
                         exact_evolution=True)
        assert result.counts == {k: 400}
        assert result.energy == pytest.approx(-omega, abs=1e-12)

    def test_zero_overlap_reference_never_reads_ground(self):
        # reference |0> is the excited +0.9 eigenstate of 0.9 Z0; the ground
        # phase bin (+16) must never appear in the readout
        n_anc, omega = 8, 0.9
        t = 2 * np.pi * 16 / ((1 << n_anc) * omega)
        h = QubitOperator.from_factors(omega, [(0, "Z")])
        result = run_qpe(h, 1, Circuit(), n_ancilla=n_anc, t=t, shots=500,
                         seed=4, exact_evolution=True)
        assert 16 not in result.counts
        assert result.counts == {(1 << n_anc) - 16: 500}

    def test_trotterized_controlled_path(self):
        n_anc, k, omega = 4, 3, 0.5
        t = 2 * np.pi * k / ((1 << n_anc) * omega)
        h = QubitOperator.from_factors(omega, [(0, "Z")])
        ref = Circuit([make_gate("X", 0)])
        result = run_qpe(h, 1, ref, n_ancilla=n_anc, t=t, trotter_steps=1,
                         shots=300, seed=5, exact_evolution=False)
        assert result.counts == {k: 300}  # single-term Trotter is exact

    def test_needs_ancillas_and_shots(self, h2_system):
        from qmolsim.algorithms import run_qpe_system

        with pytest.raises(AlgorithmError):
            run_qpe_system(h2_system, n_ancilla=0)
        with pytest.raises(AlgorithmError):
            run_qpe_system(h2_system, n_ancilla=2, shots=0)
