#!/usr/bin/env python3
"""Generate FCIDUMP fixtures for linear H-chain molecules in STO-3G.

Self-contained: s-type Gaussian integrals in closed form, RHF with DIIS,
AO->MO transformation, FCIDUMP output with orbital energies. For chains
with a symmetry flag, MOs are classified as gerade/ungerade under site
reversal and labeled with Molpro D2h indices (Ag=1, B1u=5) so that
downstream symmetry filtering can use the XOR rule.

Usage: python tools/generate_fixtures.py <outdir>
"""
from __future__ import annotations

import math
import sys
from itertools import product
from pathlib import Path

import numpy as np

ANGSTROM_TO_BOHR = 1.8897261254578281

# STO-3G hydrogen 1s: exponents and contraction coefficients
STO3G_H_EXPS = np.array([3.42525091, 0.62391373, 0.16885540])
STO3G_H_COEFFS = np.array([0.15432897, 0.53532814, 0.44463454])


def boys_f0(x: np.ndarray | float) -> np.ndarray | float:
    x = np.asarray(x, dtype=float)
    small = x < 1e-12
    safe = np.where(small, 1.0, x)
    val = 0.5 * np.sqrt(np.pi / safe) * np.vectorize(math.erf)(np.sqrt(safe))
    return np.where(small, 1.0 - x / 3.0, val)


class SContractions:
    """Contracted s functions: one per hydrogen center."""

    def __init__(self, centers: np.ndarray):
        self.centers = centers
        norms = (2.0 * STO3G_H_EXPS / np.pi) ** 0.75
        self.coeffs = STO3G_H_COEFFS * norms
        self.exps = STO3G_H_EXPS
        # normalize each contracted function exactly
        self_overlap = self._primitive_overlap(np.zeros(3), np.zeros(3))
        self.coeffs = self.coeffs / math.sqrt(self_overlap)

    def _primitive_overlap(self, a_pos, b_pos) -> float:
        r2 = float(np.dot(a_pos - b_pos, a_pos - b_pos))
        total = 0.0
        for ca, aa in zip(self.coeffs, self.exps):
            for cb, ab in zip(self.coeffs, self.exps):
                p = aa + ab
                total += ca * cb * (np.pi / p) ** 1.5 * math.exp(-aa * ab / p * r2)
        return total

    def overlap(self) -> np.ndarray:
        n = len(self.centers)
        s = np.empty((n, n))
        for i in range(n):
            for j in range(n):
                s[i, j] = self._primitive_overlap(self.centers[i], self.centers[j])
        return s

    def kinetic(self) -> np.ndarray:
        n = len(self.centers)
        t = np.empty((n, n))
        for i in range(n):
            for j in range(n):
                r2 = float(np.dot(self.centers[i] - self.centers[j],
                                  self.centers[i] - self.centers[j]))
                total = 0.0
                for ca, aa in zip(self.coeffs, self.exps):
                    for cb, ab in zip(self.coeffs, self.exps):
                        p = aa + ab
                        mu = aa * ab / p
                        total += (
                            ca * cb * mu * (3.0 - 2.0 * mu * r2)
                            * (np.pi / p) ** 1.5 * math.exp(-mu * r2)
                        )
                t[i, j] = total
        return t

    def nuclear(self, charges: np.ndarray, positions: np.ndarray) -> np.ndarray:
        n = len(self.centers)
        v = np.zeros((n, n))
        for i in range(n):
            for j in range(n):
                ra, rb = self.centers[i], self.centers[j]
                r2 = float(np.dot(ra - rb, ra - rb))
                total = 0.0
                for ca, aa in zip(self.coeffs, self.exps):
                    for cb, ab in zip(self.coeffs, self.exps):
                        p = aa + ab
                        pref = ca * cb * 2.0 * np.pi / p * math.exp(-aa * ab / p * r2)
                        p_pos = (aa * ra + ab * rb) / p
                        for z, rc in zip(charges, positions):
                            pc2 = float(np.dot(p_pos - rc, p_pos - rc))
                            total -= pref * z * float(boys_f0(p * pc2))
                v[i, j] = total
        return v

    def eri(self) -> np.ndarray:
        n = len(self.centers)
        g = np.zeros((n, n, n, n))
        # contracted pair quantities
        pairs = {}
        for i in range(n):
            for j in range(n):
                entries = []
                ra, rb = self.centers[i], self.centers[j]
                r2 = float(np.dot(ra - rb, ra - rb))
                for ca, aa in zip(self.coeffs, self.exps):
                    for cb, ab in zip(self.coeffs, self.exps):
                        p = aa + ab
                        k = ca * cb * math.exp(-aa * ab / p * r2)
                        p_pos = (aa * ra + ab * rb) / p
                        entries.append((p, k, p_pos))
                pairs[(i, j)] = entries
        for i, j, k, l in product(range(n), repeat=4):
            if g[i, j, k, l] != 0.0:
                continue
            total = 0.0
            for p, kab, p_pos in pairs[(i, j)]:
                for q, kcd, q_pos in pairs[(k, l)]:
                    pq2 = float(np.dot(p_pos - q_pos, p_pos - q_pos))
                    total += (
                        kab * kcd * 2.0 * np.pi ** 2.5
                        / (p * q * math.sqrt(p + q))
                        * float(boys_f0(p * q / (p + q) * pq2))
                    )
            for idx in {(i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
                        (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i)}:
                g[idx] = total
        return g


def rhf(s, t, v, g, n_electrons, e_nuc, max_iter=200, tol=1e-12):
    """Closed-shell RHF with DIIS. Returns (E_total, MO coeffs, MO energies)."""
    h_core = t + v
    s_vals, s_vecs = np.linalg.eigh(s)
    x = s_vecs / np.sqrt(s_vals)
    n_occ = n_electrons // 2

    def diagonalize(fock):
        f_ortho = x.T @ fock @ x
        e_mo, c_ortho = np.linalg.eigh(f_ortho)
        return e_mo, x @ c_ortho

    e_mo, c = diagonalize(h_core)
    density = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T
    energy = 0.0
    focks, errors = [], []
    for _ in range(max_iter):
        j_mat = np.einsum("ijkl,kl->ij", g, density)
        k_mat = np.einsum("ikjl,kl->ij", g, density)
        fock = h_core + j_mat - 0.5 * k_mat
        err = fock @ density @ s - s @ density @ fock
        focks.append(fock)
        errors.append(err)
        if len(focks) > 8:
            focks.pop(0)
            errors.pop(0)
        if len(focks) > 1:  # DIIS extrapolation
            m = len(focks)
            b = -np.ones((m + 1, m + 1))
            b[m, m] = 0.0
            for a in range(m):
                for bb in range(m):
                    b[a, bb] = np.sum(errors[a] * errors[bb])
            rhs = np.zeros(m + 1)
            rhs[m] = -1.0
            try:
                weights = np.linalg.solve(b, rhs)[:m]
                fock = sum(w * f for w, f in zip(weights, focks))
            except np.linalg.LinAlgError:
                pass
        e_mo, c = diagonalize(fock)
        density_new = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T
        energy_new = 0.5 * np.sum(density_new * (h_core + fock)) + e_nuc
        if abs(energy_new - energy) < tol and np.max(np.abs(density_new - density)) < 1e-10:
            return energy_new, c, e_mo
        density, energy = density_new, energy_new
    raise RuntimeError(f"SCF failed to converge (last E={energy:.12f})")


def mo_integrals(h_core, g, c):
    h_mo = c.T @ h_core @ c
    g_mo = np.einsum("pqrs,pi,qj,rk,sl->ijkl", g, c, c, c, c, optimize=True)
    return h_mo, g_mo


def classify_gerade(c: np.ndarray) -> list[int]:
    """Molpro D2h labels for a symmetric chain: 1 (Ag) or 5 (B1u)."""
    n = c.shape[0]
    labels = []
    for k in range(c.shape[1]):
        col = c[:, k]
        flipped = col[::-1]
        if np.allclose(flipped, col, atol=1e-8):
            labels.append(1)
        elif np.allclose(flipped, -col, atol=1e-8):
            labels.append(5)
        else:
            raise RuntimeError(f"MO {k} is not symmetry-pure; cannot label")
    return labels


def write_fcidump(path: Path, h_mo, g_mo, e_nuc, n_electrons, eps, orbsym):
    norb = h_mo.shape[0]
    lines = [
        f" &FCI NORB={norb:3d},NELEC={n_electrons:3d},MS2=0,",
        "  ORBSYM=" + ",".join(str(s) for s in orbsym) + ",",
        "  ISYM=1,",
        " &END",
    ]

    def fmt(value, i, j, k, l):
        return f" {value: .16e} {i:4d} {j:4d} {k:4d} {l:4d}"

    for i in range(norb):
        for j in range(i + 1):
            for k in range(i + 1):
                l_top = j if k == i else k
                for l in range(l_top + 1):
                    val = g_mo[i, j, k, l]
                    if abs(val) > 1e-14:
                        lines.append(fmt(val, i + 1, j + 1, k + 1, l + 1))
    for i in range(norb):
        for j in range(i + 1):
            if abs(h_mo[i, j]) > 1e-14:
                lines.append(fmt(h_mo[i, j], i + 1, j + 1, 0, 0))
    for i in range(norb):
        lines.append(fmt(eps[i], i + 1, 0, 0, 0))
    lines.append(fmt(e_nuc, 0, 0, 0, 0))
    path.write_text("\n".join(lines) + "\n")


def hydrogen_chain(n_atoms: int, spacing_angstrom: float, use_symmetry: bool,
                   out: Path) -> float:
    spacing = spacing_angstrom * ANGSTROM_TO_BOHR
    centers = np.array([[0.0, 0.0, k * spacing] for k in range(n_atoms)])
    charges = np.ones(n_atoms)
    e_nuc = 0.0
    for a in range(n_atoms):
        for b in range(a):
            e_nuc += 1.0 / np.linalg.norm(centers[a] - centers[b])

    basis = SContractions(centers)
    s = basis.overlap()
    t = basis.kinetic()
    v = basis.nuclear(charges, centers)
    g = basis.eri()
    e_rhf, c, eps = rhf(s, t, v, g, n_atoms, e_nuc)

    # deterministic sign convention: largest-|coefficient| entry positive
    for k in range(c.shape[1]):
        pivot = np.argmax(np.abs(c[:, k]))
        if c[pivot, k] < 0:
            c[:, k] *= -1.0

    h_mo, g_mo = mo_integrals(t + v, g, c)
    orbsym = classify_gerade(c) if use_symmetry else [1] * n_atoms
    write_fcidump(out, h_mo, g_mo, e_nuc, n_atoms, eps, orbsym)
    return e_rhf


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("src/qmolsim/data/fcidump")
    outdir.mkdir(parents=True, exist_ok=True)

    e = hydrogen_chain(2, 0.75, use_symmetry=False, out=outdir / "H2_0.75.fcidump")
    print(f"H2 @ 0.75 A: E_RHF = {e:.10f}")

    scan = [round(0.5 + 0.1 * k, 2) for k in range(16)]
    manifest = []
    for r in scan:
        name = f"H4_{r:.2f}.fcidump"
        e = hydrogen_chain(4, r, use_symmetry=True, out=outdir / name)
        manifest.append(name)
        print(f"H4 @ {r:.2f} A: E_RHF = {e:.10f}")
    (outdir / "H4_scan.manifest").write_text("\n".join(manifest) + "\n")

    e = hydrogen_chain(6, 1.00, use_symmetry=False, out=outdir / "H6_1.00.fcidump")
    print(f"H6 @ 1.00 A: E_RHF = {e:.10f}")


if __name__ == "__main__":
    main()
