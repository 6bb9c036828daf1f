"""Quantum imaginary time evolution and its Lanczos subspace extension."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..computer import StateVector
from ..paulis import PauliString, QubitOperator, pauli_string_matvec
from ..solvers import (
    DEFAULT_RIDGE,
    DEFAULT_TRIM_THRESHOLD,
    GeneralizedEigProblem,
    solve_generalized_eig,
    solve_linear_regularized,
)
from ..system import MolecularSystem, build_pool
from .common import (
    AlgorithmError,
    PauliEvalCounter,
    ResourceReport,
    energy_expectation,
    set_determinant,
)


def qite_pauli_pool(system: MolecularSystem, pool_kind: str) -> list[PauliString]:
    """Unitary-generator basis: JW the excitation pool and keep the unique
    Pauli strings with an odd number of Y factors (the ones with purely
    imaginary matrix elements for real Hamiltonians and states)."""
    pool = build_pool(system, pool_kind)
    seen: dict[PauliString, None] = {}
    for idx in range(len(pool)):
        for _, string in pool.jw_generator(idx):
            if string.n_y() % 2 == 1 and string not in seen:
                seen[string] = None
    return list(seen)


@dataclass
class QiteResult:
    energies: list[float]          # E at beta = 0, dbeta, 2*dbeta, ...
    dbeta: float
    norm_factors: list[float]      # per-step exp(-2*dbeta*(E_k - E_0))
    report: ResourceReport
    final_state: StateVector

    @property
    def final_energy(self) -> float:
        return self.energies[-1]


def run_qite(
    system: MolecularSystem,
    dbeta: float = 0.1,
    beta_max: float = 10.0,
    pool_kind: str = "SD",
    ridge: float = DEFAULT_RIDGE,
) -> QiteResult:
    """Propagate the reference in imaginary time with per-step unitaries.

    Each step measures S_{mu nu} = <rho_mu rho_nu>, b_mu = Re[-i <rho_mu H>] /
    sqrt(N), solves (S + ridge) alpha = b, and applies the Trotterized
    unitary prod_mu exp(-i dbeta alpha_mu rho_mu) in fixed pool order.
    """
    if dbeta <= 0:
        raise AlgorithmError("QITE requires dbeta > 0")
    n_steps = int(round(beta_max / dbeta))
    hamiltonian = system.qubit_hamiltonian
    strings = qite_pauli_pool(system, pool_kind)
    if not strings:
        raise AlgorithmError("QITE expansion pool is empty")
    counter = PauliEvalCounter()
    n_qubits = system.n_qubits

    state = StateVector(n_qubits)
    set_determinant(state, system.hf_reference)
    energies = [energy_expectation(state, hamiltonian, counter)]
    norm_factors: list[float] = []
    n_cnot_deepest = 0
    m = len(strings)

    for _ in range(n_steps):
        energy = energies[-1]
        h_psi = state.copy()
        h_psi.apply_operator(hamiltonian)
        sigma = np.empty((m, state.amplitudes.size), dtype=complex)
        for mu, string in enumerate(strings):
            sigma[mu] = pauli_string_matvec(string, state.amplitudes, n_qubits)
        s_matrix = np.real(sigma.conj() @ sigma.T)
        counter.energy += m * (m + 1) // 2
        norm = 1.0 - 2.0 * dbeta * energy
        b = np.real(-1j * (sigma.conj() @ h_psi.amplitudes)) / np.sqrt(norm)
        counter.energy += m * hamiltonian.n_pauli_strings()

        alpha = np.real(solve_linear_regularized(s_matrix, b, ridge))
        for mu, string in enumerate(strings):
            if alpha[mu] != 0.0:
                state.apply_pauli_rotation(string, -dbeta * alpha[mu])
                n_cnot_deepest += 2 * (string.weight - 1)
        energies.append(energy_expectation(state, hamiltonian, counter))
        norm_factors.append(float(np.exp(-2.0 * dbeta * (energy - energies[0]))))

    report = ResourceReport(
        n_parameters=m,
        n_cnot=n_cnot_deepest,
        n_pauli_evaluations=counter.total,
        n_iterations=n_steps,
        final_energy=energies[-1],
        n_pauli_evaluations_energy=counter.energy,
        n_pauli_evaluations_gradient=counter.gradient,
    )
    return QiteResult(energies, dbeta, norm_factors, report, state)


@dataclass
class SubspaceResult:
    s_matrix: np.ndarray
    h_matrix: np.ndarray
    energies: np.ndarray
    retained_dim: int
    report: ResourceReport

    @property
    def ground_energy(self) -> float:
        return float(self.energies[0])


def run_qlanczos(
    qite_run: QiteResult,
    trim_threshold: float = DEFAULT_TRIM_THRESHOLD,
    gap: int = 2,
) -> SubspaceResult:
    """Diagonalize in the span of stored QITE states without new circuits.

    Basis vectors sit at every ``gap``-th step so paired indices m, n share
    an integral midpoint k = (m+n)/2; matrix elements follow from the stored
    normalization products, S_mn = N(m)N(n)/N(k)^2 and H_mn = S_mn * E_k,
    with N the normalization coefficient accumulated along the trajectory.
    """
    if gap < 2 or gap % 2 != 0:
        raise ValueError("gap must be even so every index pair has an integral midpoint")
    energies = qite_run.energies
    n_recorded = len(energies) - 1
    steps = list(range(0, n_recorded + 1, gap))
    # log of the normalization coefficient N(beta_m) (paper's 1/sqrt form)
    log_n = np.concatenate([[0.0], 0.5 * np.cumsum(-np.log(qite_run.norm_factors))]) \
        if qite_run.norm_factors else np.zeros(1)

    dim = len(steps)
    s_matrix = np.empty((dim, dim))
    h_matrix = np.empty((dim, dim))
    for a, m_step in enumerate(steps):
        for b, n_step in enumerate(steps):
            k = (m_step + n_step) // 2
            overlap = np.exp(log_n[m_step] + log_n[n_step] - 2.0 * log_n[k])
            s_matrix[a, b] = overlap
            h_matrix[a, b] = overlap * energies[k]

    # The product-formula S is only approximately a Gram matrix; clip the
    # spurious negative dust so the canonical orthogonalization sees a PSD
    # input (those directions fall below the trim threshold regardless).
    s_vals, s_vecs = np.linalg.eigh(s_matrix)
    s_matrix = (s_vecs * np.clip(s_vals, 0.0, None)) @ s_vecs.T

    vals, _, retained = solve_generalized_eig(
        GeneralizedEigProblem(h_matrix, s_matrix, trim_threshold)
    )
    report = ResourceReport(
        n_parameters=dim,
        n_cnot=qite_run.report.n_cnot,
        n_pauli_evaluations=0,  # reuses QITE measurements only
        n_iterations=0,
        final_energy=float(vals[0]),
    )
    return SubspaceResult(s_matrix, h_matrix, vals, retained, report)
