import numpy as np
import pytest

from qmolsim.data import fixture_path
from qmolsim.system import load_fcidump


@pytest.fixture(scope="session")
def h2_system():
    return load_fcidump(fixture_path("H2_0.75.fcidump"))


@pytest.fixture(scope="session")
def h4_system():
    return load_fcidump(fixture_path("H4_1.00.fcidump"))


@pytest.fixture(scope="session")
def h4_stretched():
    return load_fcidump(fixture_path("H4_2.00.fcidump"))


def dense_gate_matrix(gate, n_qubits: int) -> np.ndarray:
    """Independent dense embedding of a gate into the full register."""
    dim = 1 << n_qubits
    mat = np.zeros((dim, dim), dtype=complex)
    u = gate.matrix
    if gate.control is None:
        t = gate.target
        for col in range(dim):
            col_bit = (col >> t) & 1
            for row_bit in (0, 1):
                row = (col & ~(1 << t)) | (row_bit << t)
                mat[row, col] += u[row_bit, col_bit]
    else:
        c, t = gate.control, gate.target
        for col in range(dim):
            j = 2 * ((col >> c) & 1) + ((col >> t) & 1)
            base = col & ~(1 << c) & ~(1 << t)
            for i in range(4):
                row = base | ((i >> 1) << c) | ((i & 1) << t)
                mat[row, col] += u[i, j]
    return mat


def dense_circuit_matrix(circuit, n_qubits: int) -> np.ndarray:
    mat = np.eye(1 << n_qubits, dtype=complex)
    for gate in circuit:
        mat = dense_gate_matrix(gate, n_qubits) @ mat
    return mat


def hermitian_expm(matrix: np.ndarray, factor: complex) -> np.ndarray:
    """exp(factor * M) for Hermitian M through the spectral decomposition."""
    vals, vecs = np.linalg.eigh(matrix)
    return vecs @ (np.exp(factor * vals)[:, None] * vecs.conj().T)


def random_circuit(rng: np.random.Generator, n_qubits: int, n_gates: int):
    """Random circuit over the full gate set (oracle-test workhorse)."""
    from qmolsim.circuits import Circuit
    from qmolsim.gates import make_gate

    one_q = ["X", "Y", "Z", "H", "S", "Sdg", "T", "Tdg", "V", "Vdg"]
    one_q_param = ["Rx", "Ry", "Rz", "R"]
    two_q = ["CNOT", "CZ", "SWAP"]
    two_q_param = ["CR"]
    circ = Circuit()
    for _ in range(n_gates):
        family = rng.integers(4)
        if family == 0 or n_qubits < 2:
            circ.add(make_gate(one_q[rng.integers(len(one_q))], int(rng.integers(n_qubits))))
        elif family == 1:
            circ.add(
                make_gate(
                    one_q_param[rng.integers(len(one_q_param))],
                    int(rng.integers(n_qubits)),
                    parameter=float(rng.uniform(-np.pi, np.pi)),
                )
            )
        else:
            t, c = rng.choice(n_qubits, size=2, replace=False)
            if family == 2:
                circ.add(make_gate(two_q[rng.integers(len(two_q))], int(t), int(c)))
            else:
                circ.add(
                    make_gate("CR", int(t), int(c), float(rng.uniform(-np.pi, np.pi)))
                )
    return circ


def fermionic_ladder_matrix(mode: int, n_modes: int, dagger: bool) -> np.ndarray:
    """Creation/annihilation matrices in the occupation basis, built from the
    standard (-1)^{sum of lower occupations) sign rule (independent of JW)."""
    dim = 1 << n_modes
    mat = np.zeros((dim, dim), dtype=complex)
    for state in range(dim):
        occupied = (state >> mode) & 1
        sign = (-1) ** bin(state & ((1 << mode) - 1)).count("1")
        if dagger and not occupied:
            mat[state | (1 << mode), state] = sign
        elif not dagger and occupied:
            mat[state & ~(1 << mode), state] = sign
    return mat
