"""Disentangled-UCC VQE and its adaptive (gradient-selected) variant."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..paulis import QubitOperator, qubit_operator_matvec
from ..solvers import FD_STEP, minimize
from ..system import MolecularSystem, OperatorPool, build_pool
from .common import (
    AlgorithmError,
    AnsatzState,
    PauliEvalCounter,
    ResourceReport,
    energy_expectation,
    prepare_ansatz_state,
)


@dataclass
class VqeResult:
    energy: float
    report: ResourceReport
    ansatz: AnsatzState


def _make_objective(system, pool, indices, counter):
    hamiltonian = system.qubit_hamiltonian

    def objective(t, purpose="energy"):
        state = prepare_ansatz_state(system, pool, indices, t)
        return energy_expectation(state, hamiltonian, counter, purpose)

    def gradient(t):
        grad = np.empty(len(t))
        for k in range(len(t)):
            shift = np.zeros(len(t))
            shift[k] = FD_STEP
            grad[k] = (
                objective(t + shift, "gradient") - objective(t - shift, "gradient")
            ) / (2.0 * FD_STEP)
        return grad

    return objective, gradient


def run_vqe(
    system: MolecularSystem,
    pool_kind: str = "SD",
    optimizer: str = "bfgs",
    tol: float = 1e-6,
    max_iter: int = 300,
    pool: OperatorPool | None = None,
) -> VqeResult:
    """Minimize the dUCC trial energy from t = 0.

    The ansatz applies every pool operator in the pool's determinant order;
    energy gradients come from central finite differences on the simulator.
    """
    if pool is None:
        pool = build_pool(system, pool_kind)
    counter = PauliEvalCounter()
    indices = list(range(len(pool)))

    if not indices:
        state = prepare_ansatz_state(system, pool, [], [])
        energy = energy_expectation(state, system.qubit_hamiltonian, counter)
        ansatz = AnsatzState(pool, [], np.zeros(0), system.hf_reference)
        report = ResourceReport(
            0, 0, counter.total, 0, energy, counter.energy, counter.gradient
        )
        return VqeResult(energy, report, ansatz)

    objective, gradient = _make_objective(system, pool, indices, counter)
    use_gradient = gradient if optimizer == "bfgs" else None
    result = minimize(
        objective, np.zeros(len(indices)), method=optimizer, tol=tol,
        max_iter=max_iter, gradient=use_gradient,
    )
    if not result.converged:
        raise AlgorithmError(
            f"VQE optimizer did not converge: {result.message} "
            f"(best energy {result.fun:.10f})"
        )
    ansatz = AnsatzState(pool, indices, result.x, system.hf_reference)
    report = ResourceReport(
        n_parameters=len(indices),
        n_cnot=ansatz.n_cnot(),
        n_pauli_evaluations=counter.total,
        n_iterations=result.n_iterations,
        final_energy=result.fun,
        n_pauli_evaluations_energy=counter.energy,
        n_pauli_evaluations_gradient=counter.gradient,
    )
    return VqeResult(result.fun, report, ansatz)


def pool_gradients(
    system: MolecularSystem,
    pool: OperatorPool,
    ansatz_indices: list[int],
    amplitudes: np.ndarray,
    counter: PauliEvalCounter,
) -> np.ndarray:
    """ADAPT selection gradients g_nu = <[H, kappa_nu]> = 2 Re <H psi|kappa_nu psi>."""
    hamiltonian = system.qubit_hamiltonian
    state = prepare_ansatz_state(system, pool, ansatz_indices, amplitudes)
    h_psi = qubit_operator_matvec(hamiltonian, state.amplitudes, state.n_qubits)
    grads = np.empty(len(pool))
    for nu in range(len(pool)):
        kappa_psi = qubit_operator_matvec(
            pool.jw_generator(nu), state.amplitudes, state.n_qubits
        )
        grads[nu] = 2.0 * np.real(np.vdot(h_psi, kappa_psi))
        counter.gradient += hamiltonian.n_pauli_strings()
    return grads


def run_adapt_vqe(
    system: MolecularSystem,
    pool_kind: str = "SD",
    grad_norm_threshold: float = 1e-3,
    max_depth: int = 50,
    opt_tol: float = 1e-7,
    max_opt_iter: int = 300,
) -> VqeResult:
    """Grow the ansatz one operator at a time by largest commutator gradient.

    Each macro-iteration appends argmax |g_nu| to the ansatz end and
    re-optimizes every amplitude, warm-started from the previous solution
    with the new amplitude at zero. Stops when ||g||_2 drops below the
    threshold or the depth cap is hit.
    """
    pool = build_pool(system, pool_kind)
    if len(pool) == 0:
        raise AlgorithmError("ADAPT-VQE needs a non-empty pool")
    counter = PauliEvalCounter()
    hamiltonian = system.qubit_hamiltonian

    indices: list[int] = []
    amplitudes = np.zeros(0)
    state = prepare_ansatz_state(system, pool, indices, amplitudes)
    energy = energy_expectation(state, hamiltonian, counter)
    macro = 0

    while macro < max_depth:
        grads = pool_gradients(system, pool, indices, amplitudes, counter)
        if np.linalg.norm(grads) < grad_norm_threshold:
            break
        selected = int(np.argmax(np.abs(grads)))
        if indices and selected == indices[-1] and abs(grads[selected]) < 1e-12:
            raise AlgorithmError(
                f"ADAPT stagnation: operator {selected} reselected with zero gradient"
            )
        indices.append(selected)
        amplitudes = np.concatenate([amplitudes, [0.0]])
        macro += 1

        objective, gradient = _make_objective(system, pool, indices, counter)
        result = minimize(
            objective, amplitudes, method="bfgs", tol=opt_tol,
            max_iter=max_opt_iter, gradient=gradient,
        )
        if not result.converged:
            raise AlgorithmError(f"ADAPT micro-optimization failed: {result.message}")
        amplitudes = result.x
        energy = result.fun

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
    return VqeResult(energy, report, ansatz)
