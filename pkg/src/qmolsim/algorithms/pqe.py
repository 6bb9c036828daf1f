"""Projective quantum eigensolver with a dUCC ansatz, plus its selected
(residual-driven, adaptive) variant."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..computer import StateVector
from ..dynamics import EvolutionSpec, apply_trotter_evolution
from ..paulis import QubitOperator
from ..system import MolecularSystem, OperatorPool, build_pool, entry_for_determinant
from .common import (
    AlgorithmError,
    AnsatzState,
    PauliEvalCounter,
    ResourceReport,
    apply_ansatz,
    energy_expectation,
    prepare_ansatz_state,
    set_determinant,
)

OMEGA_ANGLE = np.pi / 4.0  # e^{(pi/4) kappa}|Phi_0> = (|Phi_0> + |Phi_mu>)/sqrt(2)


@dataclass
class PqeResult:
    energy: float
    report: ResourceReport
    ansatz: AnsatzState
    residual_norm: float


def _residuals(
    system: MolecularSystem,
    pool: OperatorPool,
    indices: list[int],
    amplitudes: np.ndarray,
    counter: PauliEvalCounter,
) -> tuple[np.ndarray, float]:
    """Residuals r_mu for every operator in the ansatz, from the three
    symmetric expectation values, plus the reference energy."""
    hamiltonian = system.qubit_hamiltonian
    e_ref = energy_expectation(
        prepare_ansatz_state(system, pool, indices, amplitudes), hamiltonian, counter
    )
    residuals = np.empty(len(indices))
    for pos, idx in enumerate(indices):
        entry = pool[idx]

        omega = StateVector(system.n_qubits)
        set_determinant(omega, system.hf_reference)
        apply_ansatz(omega, pool, [idx], [OMEGA_ANGLE])
        apply_ansatz(omega, pool, indices, amplitudes)
        e_omega = energy_expectation(omega, hamiltonian, counter)

        excited = StateVector(system.n_qubits)
        set_determinant(excited, entry.determinant)
        apply_ansatz(excited, pool, indices, amplitudes)
        e_excited = energy_expectation(excited, hamiltonian, counter)

        residuals[pos] = e_omega - 0.5 * e_ref - 0.5 * e_excited
    return residuals, e_ref


def _quasi_newton_loop(
    system, pool, indices, amplitudes, residual_tol, max_iter, counter, diis
):
    """t_mu <- t_mu + r_mu / Delta_mu until ||r||_2 < residual_tol."""
    denominators = np.array([pool[idx].denominator for idx in indices])
    if np.any(np.abs(denominators) < 1e-12):
        raise AlgorithmError("PQE requires nonzero Moller-Plesset denominators")

    history_t: list[np.ndarray] = []
    history_r: list[np.ndarray] = []
    growth_streak = 0
    previous_norm = np.inf
    energy = np.nan

    for iteration in range(1, max_iter + 1):
        residuals, energy = _residuals(system, pool, indices, amplitudes, counter)
        norm = float(np.linalg.norm(residuals))
        if norm < residual_tol:
            return amplitudes, energy, norm, iteration
        growth_streak = growth_streak + 1 if norm > previous_norm else 0
        if growth_streak >= 5:
            raise AlgorithmError(
                f"PQE diverged: residual norm grew 5 consecutive iterations "
                f"(now {norm:.3e})"
            )
        previous_norm = norm

        amplitudes = amplitudes + residuals / denominators
        if diis:
            history_t.append(amplitudes.copy())
            history_r.append(residuals / denominators)
            if len(history_t) > 6:
                history_t.pop(0)
                history_r.pop(0)
            if len(history_t) >= 2:
                m = len(history_t)
                b = -np.ones((m + 1, m + 1))
                b[m, m] = 0.0
                for a in range(m):
                    for c in range(m):
                        b[a, c] = history_r[a] @ history_r[c]
                rhs = np.zeros(m + 1)
                rhs[m] = -1.0
                try:
                    w = np.linalg.solve(b, rhs)[:m]
                    amplitudes = sum(wi * ti for wi, ti in zip(w, history_t))
                except np.linalg.LinAlgError:
                    pass

    residuals, energy = _residuals(system, pool, indices, amplitudes, counter)
    norm = float(np.linalg.norm(residuals))
    if norm >= residual_tol:
        raise AlgorithmError(
            f"PQE did not converge in {max_iter} iterations (||r|| = {norm:.3e})"
        )
    return amplitudes, energy, norm, max_iter


def run_pqe(
    system: MolecularSystem,
    pool_kind: str = "SD",
    residual_tol: float = 1e-7,
    max_micro_iter: int = 200,
    diis: bool = False,
    pool: OperatorPool | None = None,
) -> PqeResult:
    """Solve the projected similarity-transformed Schrodinger conditions by
    quasi-Newton updates preconditioned with orbital-energy denominators."""
    if pool is None:
        pool = build_pool(system, pool_kind)
    counter = PauliEvalCounter()
    indices = list(range(len(pool)))
    amplitudes = np.zeros(len(indices))

    if not indices:
        state = prepare_ansatz_state(system, pool, [], [])
        energy = energy_expectation(state, system.qubit_hamiltonian, counter)
        report = ResourceReport(0, 0, counter.total, 0, energy, counter.energy, 0)
        return PqeResult(energy, report, AnsatzState(pool, [], amplitudes, system.hf_reference), 0.0)

    amplitudes, energy, norm, iterations = _quasi_newton_loop(
        system, pool, indices, amplitudes, residual_tol, max_micro_iter, counter, diis
    )
    ansatz = AnsatzState(pool, indices, amplitudes, system.hf_reference)
    report = ResourceReport(
        n_parameters=len(indices),
        n_cnot=ansatz.n_cnot(),
        n_pauli_evaluations=counter.total,
        n_iterations=iterations,
        final_energy=energy,
        n_pauli_evaluations_energy=counter.energy,
        n_pauli_evaluations_gradient=counter.gradient,
    )
    return PqeResult(energy, report, ansatz, norm)


@dataclass
class SpqeResult:
    energy: float
    report: ResourceReport
    ansatz: AnsatzState
    residual_norm: float
    macro_iterations: int


def _residual_state_amplitudes(
    system: MolecularSystem,
    pool: OperatorPool,
    indices: list[int],
    amplitudes: np.ndarray,
    dt: float,
    trotter_steps: int,
) -> np.ndarray:
    """Amplitudes of |r~> = U^dag e^{i dt H} U |Phi_0>."""
    state = prepare_ansatz_state(system, pool, indices, amplitudes)
    apply_trotter_evolution(
        state, system.qubit_hamiltonian, EvolutionSpec(-dt, trotter_steps)
    )
    # adjoint ansatz: reversed order, negated amplitudes
    apply_ansatz(
        state, pool, list(reversed(indices)), [-t for t in reversed(amplitudes)]
    )
    return state.amplitudes


def residual_state_estimates(
    system: MolecularSystem,
    pool: OperatorPool,
    indices: list[int],
    amplitudes: np.ndarray,
    dt: float,
    trotter_steps: int,
    shots: int | None,
    seed: int,
) -> np.ndarray:
    """|r~_mu|^2 per determinant, exact or sampled as N_mu / M."""
    r_tilde = _residual_state_amplitudes(
        system, pool, indices, amplitudes, dt, trotter_steps
    )
    probs = np.abs(r_tilde) ** 2
    if shots is None:
        return probs
    rng = np.random.Generator(np.random.PCG64(seed))
    outcomes = rng.choice(len(probs), size=shots, p=probs / probs.sum())
    return np.bincount(outcomes, minlength=len(probs)) / shots


def select_by_cumulative_threshold(
    estimates: np.ndarray,
    reference: int,
    known: set[int],
    budget: float,
) -> list[int]:
    """Candidates sorted ascending; the longest prefix whose cumulative sum
    stays within the budget is excluded, the rest are selected."""
    candidates = [
        (estimates[det], int(det))
        for det in np.nonzero(estimates > 1e-14)[0]
        if det != reference and int(det) not in known
    ]
    candidates.sort()
    cumulative = 0.0
    selected = []
    for value, det in candidates:
        cumulative += value
        if cumulative > budget:
            selected.append(det)
    return selected


def run_spqe(
    system: MolecularSystem,
    omega: float = 1e-2,
    dt: float = 0.001,
    shots: int | None = None,
    seed: int = 7,
    residual_tol: float = 1e-7,
    max_macro_iter: int = 20,
    max_micro_iter: int = 200,
    trotter_steps: int = 1,
) -> SpqeResult:
    """Selected PQE: grow the ansatz from the measured residual state.

    Candidate squared residuals |r_mu|^2 = |r~_mu|^2 / dt^2 come from exact
    amplitudes (shots absent) or from sampling N_mu/M. Candidates are sorted
    ascending and the largest prefix whose cumulative sum stays within
    Omega^2 is excluded; the remainder (any excitation rank) joins the
    ansatz, which is then re-solved with the PQE update.
    """
    if dt <= 0 or omega <= 0:
        raise AlgorithmError("SPQE needs dt > 0 and omega > 0")
    counter = PauliEvalCounter()
    hamiltonian = system.qubit_hamiltonian

    pool = OperatorPool([], kind="SPQE-adaptive")
    known: dict[int, int] = {}  # determinant -> pool position
    indices: list[int] = []
    amplitudes = np.zeros(0)
    energy = energy_expectation(
        prepare_ansatz_state(system, pool, [], []), hamiltonian, counter
    )
    norm = 0.0
    macro = 0

    while macro < max_macro_iter:
        estimates = residual_state_estimates(
            system, pool, indices, amplitudes, dt, trotter_steps, shots, seed + macro
        )
        counter.energy += 1  # one residual-state preparation/measurement pass
        selected = select_by_cumulative_threshold(
            estimates, system.hf_reference, set(known), omega * omega * dt * dt
        )
        if not selected:
            break
        # most important operators first at the ansatz end
        for det in sorted(selected, key=lambda d: -estimates[d]):
            entry = entry_for_determinant(system, det)
            pool.entries.append(entry)
            known[det] = len(pool.entries) - 1
            indices.append(known[det])
        amplitudes = np.concatenate([amplitudes, np.zeros(len(selected))])
        macro += 1

        amplitudes, energy, norm, _ = _quasi_newton_loop(
            system, pool, indices, amplitudes, residual_tol, max_micro_iter, counter,
            diis=False,
        )

    ansatz = AnsatzState(pool, indices, amplitudes, system.hf_reference)
    report = ResourceReport(
        n_parameters=len(indices),
        n_cnot=ansatz.n_cnot(),
        n_pauli_evaluations=counter.total,
        n_iterations=macro,
        final_energy=energy,
        n_pauli_evaluations_energy=counter.energy,
        n_pauli_evaluations_gradient=counter.gradient,
    )
    return SpqeResult(energy, report, ansatz, norm, macro)
