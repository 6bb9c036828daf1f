"""Pauli strings and Pauli-sum operators.

A Pauli string is stored as a pair of bit masks (x_mask, z_mask): qubit q
carries X if only bit q of x_mask is set, Z if only bit q of z_mask, and Y if
both. This makes products, canonical ordering and hashing cheap bit
arithmetic. The identity is (0, 0).

A QubitOperator is a list of (complex coefficient, PauliString) terms,
kept simplified (distinct strings, coefficients above a pruning threshold).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

AXES = ("X", "Y", "Z")

# |coefficient| below this is treated as cancellation dust and dropped.
COEFF_PRUNE_THRESHOLD = 1e-14

_PHASES = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)


@dataclass(frozen=True, order=True)
class PauliString:
    """Product of single-qubit Pauli factors on distinct qubits."""

    z_mask: int = 0
    x_mask: int = 0

    @staticmethod
    def from_factors(factors: Iterable[tuple[int, str]]) -> "PauliString":
        x = z = 0
        seen = 0
        for qubit, axis in factors:
            bit = 1 << qubit
            if seen & bit:
                raise ValueError(f"duplicate qubit {qubit} in Pauli string")
            seen |= bit
            if axis == "X":
                x |= bit
            elif axis == "Y":
                x |= bit
                z |= bit
            elif axis == "Z":
                z |= bit
            else:
                raise ValueError(f"unknown Pauli axis '{axis}'")
        return PauliString(z_mask=z, x_mask=x)

    def factors(self) -> list[tuple[int, str]]:
        """(qubit, axis) pairs in ascending qubit order."""
        out = []
        support = self.x_mask | self.z_mask
        q = 0
        while support >> q:
            bit = 1 << q
            if support & bit:
                if self.x_mask & bit and self.z_mask & bit:
                    out.append((q, "Y"))
                elif self.x_mask & bit:
                    out.append((q, "X"))
                else:
                    out.append((q, "Z"))
            q += 1
        return out

    @property
    def weight(self) -> int:
        return (self.x_mask | self.z_mask).bit_count()

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def max_qubit(self) -> int:
        support = self.x_mask | self.z_mask
        return support.bit_length() - 1 if support else -1

    def n_y(self) -> int:
        return (self.x_mask & self.z_mask).bit_count()

    def __str__(self) -> str:
        if self.is_identity:
            return "I"
        return " ".join(f"{axis}{q}" for q, axis in self.factors())


def pauli_multiply(a: PauliString, b: PauliString) -> tuple[complex, PauliString]:
    """Product a*b as (phase, string) with phase in {1, i, -1, -i}.

    Uses the symplectic form W(x,z) = i^{|x&z|} X^x Z^z, so the phase
    exponent is |x1&z1| + |x2&z2| + 2|z1&x2| - |x3&z3| (mod 4) with
    x3 = x1^x2, z3 = z1^z2.
    """
    x3 = a.x_mask ^ b.x_mask
    z3 = a.z_mask ^ b.z_mask
    k = (
        (a.x_mask & a.z_mask).bit_count()
        + (b.x_mask & b.z_mask).bit_count()
        + 2 * (a.z_mask & b.x_mask).bit_count()
        - (x3 & z3).bit_count()
    )
    return _PHASES[k % 4], PauliString(z_mask=z3, x_mask=x3)


class QubitOperator:
    """Linear combination of Pauli strings with complex coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[tuple[complex, PauliString]] = ()):
        self._terms: list[tuple[complex, PauliString]] = []
        merged: dict[PauliString, complex] = {}
        for coeff, string in terms:
            merged[string] = merged.get(string, 0.0) + complex(coeff)
        for string in sorted(merged):
            coeff = merged[string]
            if abs(coeff) >= COEFF_PRUNE_THRESHOLD:
                self._terms.append((coeff, string))

    @staticmethod
    def identity(coeff: complex = 1.0) -> "QubitOperator":
        return QubitOperator([(coeff, PauliString())])

    @staticmethod
    def from_factors(coeff: complex, factors: Iterable[tuple[int, str]]) -> "QubitOperator":
        return QubitOperator([(coeff, PauliString.from_factors(factors))])

    def terms(self) -> list[tuple[complex, PauliString]]:
        return list(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[complex, PauliString]]:
        return iter(self._terms)

    def n_pauli_strings(self) -> int:
        """Distinct Pauli strings, identity included."""
        return len(self._terms)

    def max_qubit(self) -> int:
        return max((s.max_qubit() for _, s in self._terms), default=-1)

    def identity_coefficient(self) -> complex:
        for coeff, string in self._terms:
            if string.is_identity:
                return coeff
        return 0.0

    def __add__(self, other: "QubitOperator") -> "QubitOperator":
        return QubitOperator(self._terms + other._terms)

    def __sub__(self, other: "QubitOperator") -> "QubitOperator":
        return self + (other * -1.0)

    def __mul__(self, factor) -> "QubitOperator":
        if isinstance(factor, QubitOperator):
            prod = []
            for ca, sa in self._terms:
                for cb, sb in factor._terms:
                    phase, s = pauli_multiply(sa, sb)
                    prod.append((ca * cb * phase, s))
            return QubitOperator(prod)
        return QubitOperator([(c * factor, s) for c, s in self._terms])

    def __rmul__(self, factor: complex) -> "QubitOperator":
        return self * factor

    def adjoint(self) -> "QubitOperator":
        return QubitOperator([(np.conj(c), s) for c, s in self._terms])

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return all(abs(c.imag) <= tol for c, _ in self._terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for coeff, string in self._terms:
            if abs(coeff.imag) < 1e-14:
                leading = f"{coeff.real:+.10g}"
            else:
                leading = f"+({coeff.real:.10g}{coeff.imag:+.10g}j)"
            parts.append(f"{leading} {string}")
        return "\n".join(parts)


def _phase_vector(string: PauliString, n_qubits: int) -> tuple[np.ndarray, np.ndarray]:
    """For P|j> = w[j] |j ^ x_mask>, return (target indices, weights w)."""
    dim = 1 << n_qubits
    idx = np.arange(dim, dtype=np.int64)
    masked = idx & string.z_mask
    # parity of masked bits via xor-fold
    v = masked.copy()
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> shift
    signs = 1.0 - 2.0 * (v & 1)
    w = (1j ** ((string.x_mask & string.z_mask).bit_count() % 4)) * signs
    return idx ^ string.x_mask, w


def pauli_string_matvec(string: PauliString, amps: np.ndarray, n_qubits: int) -> np.ndarray:
    """Apply a single Pauli string to an amplitude vector (new array)."""
    target, w = _phase_vector(string, n_qubits)
    out = np.empty_like(amps)
    out[target] = w * amps
    return out


def qubit_operator_matvec(op: QubitOperator, amps: np.ndarray, n_qubits: int) -> np.ndarray:
    """Apply a (generally non-unitary) Pauli-sum operator to a vector."""
    out = np.zeros_like(amps)
    for coeff, string in op:
        target, w = _phase_vector(string, n_qubits)
        out[target] += coeff * w * amps
    return out


def qubit_operator_matrix(op: QubitOperator, n_qubits: int, max_qubits: int = 12) -> np.ndarray:
    """Dense 2^n x 2^n matrix of the operator (oracle scale only)."""
    if n_qubits > max_qubits:
        raise ValueError(f"dense matrix limited to {max_qubits} qubits, got {n_qubits}")
    if op.max_qubit() >= n_qubits:
        raise ValueError("operator acts on qubits outside the register")
    dim = 1 << n_qubits
    mat = np.zeros((dim, dim), dtype=complex)
    cols = np.arange(dim, dtype=np.int64)
    for coeff, string in op:
        rows, w = _phase_vector(string, n_qubits)
        mat[rows, cols] += coeff * w
    return mat


def render_operator(op: QubitOperator) -> str:
    """Text form used by the CLI: one '+c X0 Z1 ...' term per line."""
    return str(op)


def parse_pauli_label(label: str) -> PauliString:
    """Parse 'X0 Z1 Y4' (or 'I') into a PauliString."""
    label = label.strip()
    if label in ("", "I"):
        return PauliString()
    factors = []
    for tok in label.split():
        axis, q = tok[0], tok[1:]
        factors.append((int(q), axis))
    return PauliString.from_factors(factors)
