"""Second-quantized operators and the Jordan-Wigner transform.

Terms are normal ordered: all creation operators stand left of all
annihilation operators. Within each group the indices are stored in
descending order; input given in another order is brought to descending
order with the fermionic permutation sign. Wick reordering across the
creator/annihilator boundary is never performed.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .paulis import PauliString, QubitOperator


def _sort_descending(indices: Sequence[int], what: str) -> tuple[tuple[int, ...], int]:
    """Sort operator indices descending; return (tuple, permutation sign)."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        raise ValueError(f"repeated index among {what}: {idx}")
    sign = 1
    # insertion sort; each adjacent swap flips the fermionic sign
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] < idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return tuple(idx), sign


class SecondQuantizedOperator:
    """Sum of normal-ordered creation/annihilation strings."""

    __slots__ = ("_terms",)

    def __init__(self):
        self._terms: list[tuple[complex, tuple[int, ...], tuple[int, ...]]] = []

    def add_term(
        self,
        coeff: complex,
        creators: Sequence[int],
        annihilators: Sequence[int],
    ) -> "SecondQuantizedOperator":
        cre, sign_c = _sort_descending(creators, "creators")
        ann, sign_a = _sort_descending(annihilators, "annihilators")
        self._terms.append((complex(coeff) * sign_c * sign_a, cre, ann))
        return self

    def terms(self) -> list[tuple[complex, tuple[int, ...], tuple[int, ...]]]:
        return list(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def adjoint(self) -> "SecondQuantizedOperator":
        out = SecondQuantizedOperator()
        for coeff, cre, ann in self._terms:
            # (a+_p ... a_q ...)^dagger reverses the string; re-sorting each
            # group back to descending order absorbs the reversal signs.
            out.add_term(np.conj(coeff), list(reversed(ann)), list(reversed(cre)))
        return out

    def __add__(self, other: "SecondQuantizedOperator") -> "SecondQuantizedOperator":
        out = SecondQuantizedOperator()
        out._terms = self._terms + other._terms
        return out

    def __mul__(self, factor: complex) -> "SecondQuantizedOperator":
        out = SecondQuantizedOperator()
        out._terms = [(c * factor, cre, ann) for c, cre, ann in self._terms]
        return out

    def __rmul__(self, factor: complex) -> "SecondQuantizedOperator":
        return self * factor

    def max_index(self) -> int:
        top = -1
        for _, cre, ann in self._terms:
            for p in cre + ann:
                top = max(top, p)
        return top

    def __str__(self) -> str:
        parts = []
        for coeff, cre, ann in self._terms:
            ops = " ".join([f"{p}^" for p in cre] + [str(q) for q in ann])
            parts.append(f"({coeff:+.10g}) [{ops}]")
        return "\n".join(parts) if parts else "0"

    def jw_transform(self) -> QubitOperator:
        return jw_transform(self)


def _jw_ladder(p: int, dagger: bool) -> QubitOperator:
    """a_p -> (X_p + iY_p)/2 Z_{p-1}...Z_0; a+_p flips the sign of iY."""
    z_chain = (1 << p) - 1
    x_str = PauliString(z_mask=z_chain, x_mask=1 << p)
    y_str = PauliString(z_mask=z_chain | (1 << p), x_mask=1 << p)
    sign = -0.5j if dagger else 0.5j
    return QubitOperator([(0.5, x_str), (sign, y_str)])


def jw_transform(op: SecondQuantizedOperator) -> QubitOperator:
    """Jordan-Wigner image of a normal-ordered fermionic operator."""
    total: list[tuple[complex, PauliString]] = []
    for coeff, cre, ann in op.terms():
        product = QubitOperator.identity(coeff)
        for p in cre:
            product = product * _jw_ladder(p, dagger=True)
        for q in ann:
            product = product * _jw_ladder(q, dagger=False)
        total.extend(product.terms())
    return QubitOperator(total)
