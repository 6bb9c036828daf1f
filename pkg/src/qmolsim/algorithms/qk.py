"""Quantum Krylov diagonalization and its selected multireference variant."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..circuits import Circuit
from ..computer import StateVector
from ..dynamics import EvolutionSpec, EvolvedPrep, matrix_element, trotter_cnot_count
from ..gates import make_gate
from ..paulis import QubitOperator, qubit_operator_matvec
from ..solvers import (
    DEFAULT_TRIM_THRESHOLD,
    GeneralizedEigProblem,
    solve_generalized_eig,
)
from ..system import MolecularSystem
from .common import AlgorithmError, PauliEvalCounter, ResourceReport
from .qite import SubspaceResult


def _determinant_circuit(n_qubits: int, address: int) -> Circuit:
    circ = Circuit()
    for q in range(n_qubits):
        if (address >> q) & 1:
            circ.add(make_gate("X", q))
    return circ


def _subspace_matrices_direct(
    preps: list[EvolvedPrep],
    hamiltonian: QubitOperator,
    n_qubits: int,
    counter: PauliEvalCounter,
) -> tuple[np.ndarray, np.ndarray]:
    states = []
    for prep in preps:
        state, _ = prep.prepare(n_qubits)
        states.append(state.amplitudes)
    h_states = [
        qubit_operator_matvec(hamiltonian, amps, n_qubits) for amps in states
    ]
    dim = len(preps)
    s_matrix = np.empty((dim, dim), dtype=complex)
    h_matrix = np.empty((dim, dim), dtype=complex)
    for a in range(dim):
        for b in range(a, dim):
            s_matrix[a, b] = np.vdot(states[a], states[b])
            h_matrix[a, b] = np.vdot(states[a], h_states[b])
            s_matrix[b, a] = np.conj(s_matrix[a, b])
            h_matrix[b, a] = np.conj(h_matrix[a, b])
    # every H element measured term by term; off-diagonal S elements once each
    counter.energy += dim * dim * hamiltonian.n_pauli_strings() + dim * (dim - 1)
    return s_matrix, h_matrix


def _subspace_matrices_hadamard(
    preps: list[EvolvedPrep],
    hamiltonian: QubitOperator,
    n_qubits: int,
    counter: PauliEvalCounter,
) -> tuple[np.ndarray, np.ndarray]:
    dim = len(preps)
    s_matrix = np.empty((dim, dim), dtype=complex)
    h_matrix = np.empty((dim, dim), dtype=complex)
    n_ps = hamiltonian.n_pauli_strings()
    for a in range(dim):
        for b in range(a, dim):
            s_matrix[a, b] = matrix_element(
                preps[a], preps[b], None, "hadamard-test", n_qubits
            )
            h_matrix[a, b] = matrix_element(
                preps[a], preps[b], hamiltonian, "hadamard-test", n_qubits
            )
            s_matrix[b, a] = np.conj(s_matrix[a, b])
            h_matrix[b, a] = np.conj(h_matrix[a, b])
            counter.energy += 2 * (n_ps + 1)  # X and Y ancilla readouts per element
    return s_matrix, h_matrix


def _solve_subspace(
    s_matrix: np.ndarray,
    h_matrix: np.ndarray,
    trim_threshold: float,
    n_cnot: int,
    counter: PauliEvalCounter,
) -> SubspaceResult:
    vals, _, retained = solve_generalized_eig(
        GeneralizedEigProblem(h_matrix, s_matrix, trim_threshold)
    )
    report = ResourceReport(
        n_parameters=s_matrix.shape[0],
        n_cnot=n_cnot,
        n_pauli_evaluations=counter.total,
        n_iterations=0,
        final_energy=float(vals[0]),
        n_pauli_evaluations_energy=counter.energy,
        n_pauli_evaluations_gradient=counter.gradient,
    )
    return SubspaceResult(s_matrix, h_matrix, vals, retained, report)


def krylov_preps(
    reference: Circuit,
    hamiltonian: QubitOperator,
    s: int,
    dt: float,
    trotter_steps: int,
) -> list[EvolvedPrep]:
    """Basis preparations psi_n = e^{-i n dt H} |ref>, each Trotterized as a
    fresh r-step circuit for its full evolution time."""
    return [
        EvolvedPrep(reference, hamiltonian if n else None, n * dt, trotter_steps)
        for n in range(s + 1)
    ]


def _exact_krylov_matrices(
    system: MolecularSystem,
    address: int,
    s: int,
    dt: float,
    counter: PauliEvalCounter,
) -> tuple[np.ndarray, np.ndarray]:
    from ..dynamics import exact_evolve

    hamiltonian = system.qubit_hamiltonian
    n = system.n_qubits
    states = []
    base = StateVector(n)
    base.amplitudes[:] = 0.0
    base.amplitudes[address] = 1.0
    states.append(base.amplitudes.copy())
    current = base
    for _ in range(s):
        exact_evolve(hamiltonian, dt, current)
        states.append(current.amplitudes.copy())
    h_states = [qubit_operator_matvec(hamiltonian, a, n) for a in states]
    dim = s + 1
    s_matrix = np.array(
        [[np.vdot(states[a], states[b]) for b in range(dim)] for a in range(dim)]
    )
    h_matrix = np.array(
        [[np.vdot(states[a], h_states[b]) for b in range(dim)] for a in range(dim)]
    )
    counter.energy += dim * dim * hamiltonian.n_pauli_strings() + dim * (dim - 1)
    return s_matrix, h_matrix


def run_qk(
    system: MolecularSystem,
    s: int = 3,
    dt: float = 0.5,
    trotter_steps: int = 1,
    method: str = "direct",
    trim_threshold: float = DEFAULT_TRIM_THRESHOLD,
    reference: int | None = None,
    exact_evolution: bool = False,
) -> SubspaceResult:
    """Single-reference quantum Krylov: diagonalize H in the span of
    real-time-evolved copies of the reference determinant.

    With exact_evolution the basis comes from the dense evolution operator
    (sparse-matrix path, no circuits; n_cnot reported as 0)."""
    if s < 0:
        raise AlgorithmError("QK needs s >= 0 evolved states")
    counter = PauliEvalCounter()
    hamiltonian = system.qubit_hamiltonian
    address = system.hf_reference if reference is None else reference
    if exact_evolution:
        s_matrix, h_matrix = _exact_krylov_matrices(system, address, s, dt, counter)
        return _solve_subspace(s_matrix, h_matrix, trim_threshold, 0, counter)
    ref_circuit = _determinant_circuit(system.n_qubits, address)
    preps = krylov_preps(ref_circuit, hamiltonian, s, dt, trotter_steps)
    builder = (
        _subspace_matrices_direct if method == "direct" else _subspace_matrices_hadamard
    )
    s_matrix, h_matrix = builder(preps, hamiltonian, system.n_qubits, counter)
    # deepest matrix-element circuit: bra evolution + ket evolution
    n_cnot = 2 * trotter_cnot_count(hamiltonian, EvolutionSpec(dt, trotter_steps))
    return _solve_subspace(s_matrix, h_matrix, trim_threshold, n_cnot, counter)


# ---------------------------------------------------------------------------
# Multireference selected QK
# ---------------------------------------------------------------------------

def spin_complete(determinant: int, n_spatial: int) -> list[int]:
    """All S_z-preserving spin arrangements of the open-shell pattern."""
    closed = 0
    open_spatial: list[int] = []
    n_open_alpha = 0
    for p in range(n_spatial):
        alpha = (determinant >> (2 * p)) & 1
        beta = (determinant >> (2 * p + 1)) & 1
        if alpha and beta:
            closed |= (1 << (2 * p)) | (1 << (2 * p + 1))
        elif alpha or beta:
            open_spatial.append(p)
            n_open_alpha += alpha
    if not open_spatial:
        return [determinant]
    family = []
    for alpha_sites in combinations(open_spatial, n_open_alpha):
        det = closed
        for p in open_spatial:
            det |= 1 << (2 * p) if p in alpha_sites else 1 << (2 * p + 1)
        family.append(det)
    return sorted(family)


def rank_references(
    basis_amplitudes: list[np.ndarray],
    coefficients: np.ndarray,
    n_spatial: int,
    d: int,
    shots: int | None = None,
    seed: int = 11,
) -> list[int]:
    """Pick the d most important determinants, spin-completing open shells.

    Importance P_det = sum_alpha |<det|psi_alpha>|^2 |c_alpha|^2, measured
    exactly from amplitudes or approximated by sampling each basis state.
    """
    weights = np.abs(coefficients) ** 2
    dim = basis_amplitudes[0].size
    importance = np.zeros(dim)
    for alpha, amps in enumerate(basis_amplitudes):
        if shots is None:
            probs = np.abs(amps) ** 2
        else:
            rng = np.random.Generator(np.random.PCG64(seed + alpha))
            p = np.abs(amps) ** 2
            outcomes = rng.choice(dim, size=shots, p=p / p.sum())
            probs = np.bincount(outcomes, minlength=dim) / shots
        importance += weights[alpha] * probs

    order = np.argsort(-importance, kind="stable")
    chosen: list[int] = []
    for det in order:
        if importance[det] < 1e-12 or int(det) in chosen:
            continue
        for member in spin_complete(int(det), n_spatial):
            if member not in chosen:
                chosen.append(member)
        if len(chosen) >= d:
            break
    if len(chosen) < d:
        raise AlgorithmError(
            f"only {len(chosen)} determinants with nonzero importance; need {d}"
        )
    return chosen


def run_mrsqk(
    system: MolecularSystem,
    d: int = 2,
    s: int = 3,
    dt: float = 0.5,
    trotter_steps: int = 1,
    s_prelim: int | None = None,
    dt_prelim: float | None = None,
    shots: int | None = None,
    seed: int = 11,
    method: str = "direct",
    trim_threshold: float = DEFAULT_TRIM_THRESHOLD,
) -> SubspaceResult:
    """Multireference selected QK: a preliminary single-reference QK ranks
    determinants by importance; the top d (spin-completed) references are
    each time evolved to span a d*(s+1)-dimensional subspace."""
    if d < 1:
        raise AlgorithmError("MRSQK needs d >= 1 references")
    s_prelim = s if s_prelim is None else s_prelim
    dt_prelim = dt if dt_prelim is None else dt_prelim
    counter = PauliEvalCounter()
    hamiltonian = system.qubit_hamiltonian
    n_qubits = system.n_qubits

    # preliminary single-reference run
    ref_circuit = _determinant_circuit(n_qubits, system.hf_reference)
    prelim_preps = krylov_preps(
        ref_circuit, hamiltonian, s_prelim, dt_prelim, trotter_steps
    )
    s_pre, h_pre = _subspace_matrices_direct(prelim_preps, hamiltonian, n_qubits, counter)
    vals, vecs, _ = solve_generalized_eig(
        GeneralizedEigProblem(h_pre, s_pre, trim_threshold)
    )
    ground = vecs[:, 0]
    basis_amps = [prep.prepare(n_qubits)[0].amplitudes for prep in prelim_preps]
    counter.energy += len(basis_amps)  # one sampling pass per basis state

    references = rank_references(
        basis_amps, ground, system.n_spatial, d, shots=shots, seed=seed
    )

    preps: list[EvolvedPrep] = []
    for det in references:
        det_circ = _determinant_circuit(n_qubits, det)
        preps.extend(krylov_preps(det_circ, hamiltonian, s, dt, trotter_steps))
    builder = (
        _subspace_matrices_direct if method == "direct" else _subspace_matrices_hadamard
    )
    s_matrix, h_matrix = builder(preps, hamiltonian, n_qubits, counter)
    n_cnot = 2 * trotter_cnot_count(hamiltonian, EvolutionSpec(dt, trotter_steps))
    return _solve_subspace(s_matrix, h_matrix, trim_threshold, n_cnot, counter)
