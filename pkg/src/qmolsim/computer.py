"""Dense state-vector simulator.

Amplitudes live in one complex array of length 2^n_qubits; the array index
IS the basis address, with qubit 0 as the least significant bit. Gates are
applied with kernels specialized by gate family:

* diagonal gates (Z, S, T, Rz, R, CZ, CR) scale amplitude slices in place,
* X / CNOT / SWAP move strided blocks with pure copies,
* everything else falls back to a generic 2x2 (or 4x4) block combination.

All kernels address disjoint strides of the vector, so they are equivalent
to the dense-matrix action of the gate on the full register.
"""
from __future__ import annotations

import math

import numpy as np

from .gates import Gate, make_gate
from .paulis import (
    PauliString,
    QubitOperator,
    pauli_string_matvec,
    qubit_operator_matvec,
)

# Default allocation cap: 2^26 amplitudes (1 GiB of complex128).
DEFAULT_MAX_AMPLITUDES = 1 << 26

_DIAG_1Q = {"Z", "S", "Sdg", "T", "Tdg", "Rz", "R", "I"}


class CapacityError(ValueError):
    """Register size zero or beyond the configured memory cap."""


class StateVector:
    """A 2^n-dimensional quantum register initialized to |0...0>."""

    def __init__(self, n_qubits: int, max_amplitudes: int = DEFAULT_MAX_AMPLITUDES):
        if n_qubits < 1:
            raise CapacityError("a computer needs at least one qubit")
        if n_qubits > 64 or (1 << n_qubits) > max_amplitudes:
            raise CapacityError(
                f"2^{n_qubits} amplitudes exceed the cap of {max_amplitudes}"
            )
        self.n_qubits = n_qubits
        self.amplitudes = np.zeros(1 << n_qubits, dtype=complex)
        self.amplitudes[0] = 1.0

    # -- basic inspection ------------------------------------------------

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> "StateVector":
        dup = StateVector.__new__(StateVector)
        dup.n_qubits = self.n_qubits
        dup.amplitudes = self.amplitudes.copy()
        return dup

    def set_amplitudes(self, amps: np.ndarray) -> None:
        if amps.shape != self.amplitudes.shape:
            raise ValueError("amplitude vector has the wrong length")
        self.amplitudes = np.asarray(amps, dtype=complex).copy()

    # -- gate application ------------------------------------------------

    def _check_gate(self, gate: Gate) -> None:
        if gate.max_qubit() >= self.n_qubits:
            raise IndexError(
                f"gate {gate} addresses qubit {gate.max_qubit()} "
                f"on a {self.n_qubits}-qubit register"
            )

    def _view1(self, target: int) -> np.ndarray:
        """Reshape so axis 1 is the target qubit's bit."""
        n = self.n_qubits
        return self.amplitudes.reshape(1 << (n - 1 - target), 2, 1 << target)

    def _view2(self, hi: int, lo: int) -> np.ndarray:
        """Reshape so axes 1 and 3 are bits hi > lo."""
        n = self.n_qubits
        return self.amplitudes.reshape(
            1 << (n - 1 - hi), 2, 1 << (hi - 1 - lo), 2, 1 << lo
        )

    def apply_gate(self, gate: Gate) -> None:
        self._check_gate(gate)
        kind = gate.kind
        if gate.control is None:
            if kind == "I":
                return
            if kind == "X":
                a = self._view1(gate.target)
                tmp = a[:, 0, :].copy()
                a[:, 0, :] = a[:, 1, :]
                a[:, 1, :] = tmp
            elif kind in _DIAG_1Q:
                m = gate.matrix
                a = self._view1(gate.target)
                if m[0, 0] != 1.0:
                    a[:, 0, :] *= m[0, 0]
                a[:, 1, :] *= m[1, 1]
            else:
                m = gate.matrix
                a = self._view1(gate.target)
                lo = a[:, 0, :].copy()
                hi = a[:, 1, :]
                a[:, 0, :] = m[0, 0] * lo + m[0, 1] * hi
                a[:, 1, :] = m[1, 0] * lo + m[1, 1] * hi
            return

        c, t = gate.control, gate.target
        hi, lo = (c, t) if c > t else (t, c)
        a = self._view2(hi, lo)

        def block(bc: int, bt: int) -> tuple:
            if c > t:
                return (slice(None), bc, slice(None), bt, slice(None))
            return (slice(None), bt, slice(None), bc, slice(None))

        if kind == "CNOT":
            tmp = a[block(1, 0)].copy()
            a[block(1, 0)] = a[block(1, 1)]
            a[block(1, 1)] = tmp
        elif kind == "CZ":
            a[block(1, 1)] *= -1.0
        elif kind == "CR":
            a[block(1, 1)] *= np.exp(1j * gate.parameter)
        elif kind == "SWAP":
            tmp = a[block(0, 1)].copy()
            a[block(0, 1)] = a[block(1, 0)]
            a[block(1, 0)] = tmp
        else:  # generic 4x4 in (control, target) order
            m = gate.matrix
            blocks = [a[block(i >> 1, i & 1)].copy() for i in range(4)]
            for i in range(4):
                a[block(i >> 1, i & 1)] = sum(m[i, j] * blocks[j] for j in range(4))

    def apply_circuit(self, circuit) -> None:
        """Apply gates in stored order; all indices validated up front."""
        for gate in circuit.gates:
            self._check_gate(gate)
        for gate in circuit.gates:
            self.apply_gate(gate)

    # -- Pauli-level operations -------------------------------------------

    def apply_pauli_string(self, string: PauliString) -> None:
        if string.max_qubit() >= self.n_qubits:
            raise IndexError("Pauli string addresses qubit outside register")
        self.amplitudes = pauli_string_matvec(string, self.amplitudes, self.n_qubits)

    def apply_operator(self, op: QubitOperator) -> None:
        """Replace |psi> with O|psi| (generally non-unitary)."""
        if op.max_qubit() >= self.n_qubits:
            raise IndexError("operator addresses qubit outside register")
        self.amplitudes = qubit_operator_matvec(op, self.amplitudes, self.n_qubits)

    def apply_pauli_rotation(self, string: PauliString, angle: float) -> None:
        """Apply exp(i*angle*P) using P^2 = 1, without gate decomposition."""
        if string.is_identity:
            self.amplitudes *= np.exp(1j * angle)
            return
        if string.max_qubit() >= self.n_qubits:
            raise IndexError("Pauli string addresses qubit outside register")
        rotated = pauli_string_matvec(string, self.amplitudes, self.n_qubits)
        self.amplitudes = math.cos(angle) * self.amplitudes + (
            1j * math.sin(angle)
        ) * rotated

    def expectation(self, op: QubitOperator) -> complex:
        """Exact <psi|O|psi> by per-term operator averaging."""
        if op.max_qubit() >= self.n_qubits:
            raise IndexError("operator addresses qubit outside register")
        total = 0.0 + 0.0j
        for coeff, string in op:
            if string.is_identity:
                total += coeff * np.vdot(self.amplitudes, self.amplitudes)
            else:
                total += coeff * np.vdot(
                    self.amplitudes,
                    pauli_string_matvec(string, self.amplitudes, self.n_qubits),
                )
        return complex(total)

    def inner_product(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    # -- sampling ----------------------------------------------------------

    def sample_basis_states(self, n_shots: int, seed: int) -> np.ndarray:
        """Draw basis addresses from |C|^2; PCG64 generator, fixed seed."""
        if n_shots < 1:
            raise ValueError("n_shots must be at least 1")
        rng = np.random.Generator(np.random.PCG64(seed))
        probs = self.probabilities()
        probs = probs / probs.sum()
        return rng.choice(len(probs), size=n_shots, p=probs)

    def measure(self, op: QubitOperator, n_shots: int, seed: int) -> complex:
        """Shot-averaged estimate of <O>, each Pauli term sampled independently.

        Per term the register is rotated into the term's measurement basis
        (H for X factors, Sdg then H for Y factors) and outcomes are drawn
        from the exact Born distribution; the term estimate is the mean of
        the +/-1 parity eigenvalues over the shots.
        """
        if n_shots < 1:
            raise ValueError("n_shots must be at least 1")
        if op.max_qubit() >= self.n_qubits:
            raise IndexError("operator addresses qubit outside register")
        rng = np.random.Generator(np.random.PCG64(seed))
        total = 0.0 + 0.0j
        for coeff, string in op:
            if string.is_identity:
                total += coeff
                continue
            rotated = self.copy()
            for q, axis in string.factors():
                if axis == "X":
                    rotated.apply_gate(make_gate("H", q))
                elif axis == "Y":
                    rotated.apply_gate(make_gate("Sdg", q))
                    rotated.apply_gate(make_gate("H", q))
            probs = rotated.probabilities()
            probs = probs / probs.sum()
            outcomes = rng.choice(len(probs), size=n_shots, p=probs)
            support = string.x_mask | string.z_mask
            masked = outcomes & support
            v = masked.copy()
            for shift in (32, 16, 8, 4, 2, 1):
                v ^= v >> shift
            eigenvalues = 1.0 - 2.0 * (v & 1)
            total += coeff * eigenvalues.mean()
        return complex(total)


def new_computer(n_qubits: int, max_amplitudes: int = DEFAULT_MAX_AMPLITUDES) -> StateVector:
    """Allocate an n-qubit register in |0...0>."""
    return StateVector(n_qubits, max_amplitudes=max_amplitudes)
