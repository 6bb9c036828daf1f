"""Molecular systems: integral ingestion, Hamiltonians, references, pools.

Integrals arrive through FCIDUMP files (namelist header; body lines
``value i j k l`` with 1-based spatial indices, chemist (ij|kl) ordering,
8-fold permutational symmetry). Spatial orbital p maps to spin orbitals
2p (alpha) and 2p+1 (beta).

When the FCIDUMP declares non-trivial ORBSYM labels, excitation pools are
filtered to operators whose orbital-irrep product is totally symmetric
(XOR rule on label-1, the standard abelian-group convention of the format).
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from .circuits import Circuit
from .computer import StateVector
from .fermion import SecondQuantizedOperator, jw_transform
from .gates import make_gate
from .paulis import PauliString, QubitOperator


class FcidumpError(ValueError):
    """Malformed FCIDUMP content."""


@dataclass
class MolecularSystem:
    """Integrals, derived Hamiltonians and the reference determinant."""

    n_spatial: int
    n_electrons: int
    ms2: int
    e_nuclear: float
    h_pq: np.ndarray            # (n_spatial, n_spatial), hartree
    g_pqrs: np.ndarray          # chemist (ij|kl), hartree
    orbital_energies: np.ndarray
    orbsym: list[int]
    source: str = ""
    sq_hamiltonian: SecondQuantizedOperator | None = None
    qubit_hamiltonian: QubitOperator | None = None

    @property
    def n_qubits(self) -> int:
        return 2 * self.n_spatial

    @property
    def n_alpha(self) -> int:
        return (self.n_electrons + self.ms2) // 2

    @property
    def n_beta(self) -> int:
        return (self.n_electrons - self.ms2) // 2

    @property
    def hf_reference(self) -> int:
        """Basis address of the aufbau single-determinant reference."""
        address = 0
        for p in range(self.n_alpha):
            address |= 1 << (2 * p)
        for p in range(self.n_beta):
            address |= 1 << (2 * p + 1)
        return address

    def occupied_spin_orbitals(self) -> list[int]:
        ref = self.hf_reference
        return [q for q in range(self.n_qubits) if (ref >> q) & 1]

    def virtual_spin_orbitals(self) -> list[int]:
        ref = self.hf_reference
        return [q for q in range(self.n_qubits) if not (ref >> q) & 1]

    def spin_orbital_energy(self, p: int) -> float:
        return float(self.orbital_energies[p // 2])

    def has_symmetry_labels(self) -> bool:
        return any(s != 1 for s in self.orbsym)

    def hf_energy(self) -> float:
        """Closed/high-spin determinant energy from the integral tensors."""
        occ_a = list(range(self.n_alpha))
        occ_b = list(range(self.n_beta))
        h, g = self.h_pq, self.g_pqrs
        e = sum(h[i, i] for i in occ_a) + sum(h[i, i] for i in occ_b)
        for occ_1, occ_2, same in (
            (occ_a, occ_a, True),
            (occ_b, occ_b, True),
            (occ_a, occ_b, False),
            (occ_b, occ_a, False),
        ):
            for i in occ_1:
                for j in occ_2:
                    e += 0.5 * g[i, i, j, j]
                    if same:
                        e -= 0.5 * g[i, j, j, i]
        return float(e + self.e_nuclear)


_NAMELIST_KV = re.compile(r"([A-Za-z0-9_]+)\s*=\s*([^=]*?)(?=(?:,?\s*[A-Za-z0-9_]+\s*=)|$)")


def _parse_header(text: str) -> dict:
    fields: dict[str, list[str]] = {}
    for key, raw in _NAMELIST_KV.findall(text):
        values = [v for v in raw.replace(",", " ").split() if v]
        fields[key.upper()] = values
    return fields


def load_fcidump(path: str | Path) -> MolecularSystem:
    """Read an FCIDUMP file and build the system (Hamiltonians included)."""
    path = Path(path)
    lines = path.read_text().splitlines()

    header_lines: list[str] = []
    body_start = None
    for ln, line in enumerate(lines):
        stripped = line.strip()
        header_lines.append(stripped)
        if "&END" in stripped.upper() or stripped == "/" or stripped.endswith("/"):
            body_start = ln + 1
            break
    if body_start is None:
        raise FcidumpError(f"{path}: no namelist terminator (&END or /) found")

    header = _parse_header(" ".join(header_lines))
    if "NORB" not in header or "NELEC" not in header:
        raise FcidumpError(f"{path}: header must define NORB and NELEC")
    norb = int(header["NORB"][0])
    nelec = int(header["NELEC"][0])
    ms2 = int(header["MS2"][0]) if "MS2" in header else 0
    orbsym = [int(s) for s in header.get("ORBSYM", ["1"] * norb)]
    if len(orbsym) != norb:
        raise FcidumpError(f"{path}: ORBSYM lists {len(orbsym)} labels for {norb} orbitals")
    if nelec > 2 * norb:
        raise FcidumpError(f"{path}: NELEC={nelec} exceeds 2*NORB={2 * norb}")
    if (nelec + ms2) % 2 != 0 or abs(ms2) > nelec:
        raise FcidumpError(f"{path}: inconsistent NELEC={nelec}, MS2={ms2}")

    h = np.zeros((norb, norb))
    g = np.zeros((norb, norb, norb, norb))
    eps = np.full(norb, np.nan)
    e_nuc = 0.0

    for ln in range(body_start, len(lines)):
        line = lines[ln].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 5:
            raise FcidumpError(f"{path}:{ln + 1}: expected 'value i j k l', got '{line}'")
        try:
            value = float(tokens[0])
            i, j, k, l = (int(t) for t in tokens[1:])
        except ValueError as exc:
            raise FcidumpError(f"{path}:{ln + 1}: {exc}") from exc
        for idx in (i, j, k, l):
            if idx < 0 or idx > norb:
                raise FcidumpError(f"{path}:{ln + 1}: orbital index {idx} out of range")
        if i == 0 and j == 0 and k == 0 and l == 0:
            e_nuc = value
        elif j == 0 and k == 0 and l == 0:
            eps[i - 1] = value
        elif k == 0 and l == 0:
            if i == 0 or j == 0:
                raise FcidumpError(f"{path}:{ln + 1}: bad one-body indices")
            h[i - 1, j - 1] = value
            h[j - 1, i - 1] = value
        else:
            if 0 in (i, j, k, l):
                raise FcidumpError(f"{path}:{ln + 1}: bad two-body indices")
            a, b, c, d = i - 1, j - 1, k - 1, l - 1
            for p, q, r, s in (
                (a, b, c, d), (b, a, c, d), (a, b, d, c), (b, a, d, c),
                (c, d, a, b), (d, c, a, b), (c, d, b, a), (d, c, b, a),
            ):
                g[p, q, r, s] = value

    if np.isnan(eps).any():
        eps = _fock_diagonal(h, g, nelec, ms2)

    system = MolecularSystem(
        n_spatial=norb,
        n_electrons=nelec,
        ms2=ms2,
        e_nuclear=e_nuc,
        h_pq=h,
        g_pqrs=g,
        orbital_energies=eps,
        orbsym=orbsym,
        source=str(path),
    )
    build_qubit_hamiltonian(system)
    return system


def _fock_diagonal(h: np.ndarray, g: np.ndarray, nelec: int, ms2: int) -> np.ndarray:
    """Closed-shell Fock diagonal: eps_p = h_pp + sum_i [2(pp|ii) - (pi|ip)]."""
    n_docc = (nelec - ms2) // 2
    norb = h.shape[0]
    eps = np.empty(norb)
    for p in range(norb):
        val = h[p, p]
        for i in range(n_docc):
            val += 2.0 * g[p, p, i, i] - g[p, i, i, p]
        eps[p] = val
    return eps


def _two_body_element(g: np.ndarray, p: int, q: int, r: int, s: int) -> float:
    """Antisymmetrized physicist <pq||rs> over spin orbitals.

    <pq|rs> = (PR|QS) when the spins of (p,r) and of (q,s) match.
    """
    val = 0.0
    if (p ^ r) & 1 == 0 and (q ^ s) & 1 == 0:
        val += g[p // 2, r // 2, q // 2, s // 2]
    if (p ^ s) & 1 == 0 and (q ^ r) & 1 == 0:
        val -= g[p // 2, s // 2, q // 2, r // 2]
    return val


def build_sq_hamiltonian(system: MolecularSystem) -> SecondQuantizedOperator:
    """Spin-orbital H = sum h_pq a+_p a_q + sum_{p>q,s>r} <pq||rs> a+_p a+_q a_s a_r."""
    n_so = system.n_qubits
    op = SecondQuantizedOperator()
    for p in range(n_so):
        for q in range(n_so):
            if (p ^ q) & 1:
                continue
            val = system.h_pq[p // 2, q // 2]
            if abs(val) > 1e-14:
                op.add_term(val, [p], [q])
    for p in range(n_so):
        for q in range(p):
            for s in range(n_so):
                for r in range(s):
                    val = _two_body_element(system.g_pqrs, p, q, r, s)
                    if abs(val) > 1e-14:
                        op.add_term(val, [p, q], [s, r])
    return op


def build_qubit_hamiltonian(system: MolecularSystem) -> QubitOperator:
    """JW-transform the fermionic Hamiltonian; nuclear repulsion rides on
    the identity string so the operator average is the total energy."""
    if system.qubit_hamiltonian is not None:
        return system.qubit_hamiltonian
    sq_ham = build_sq_hamiltonian(system)
    qubit_ham = jw_transform(sq_ham) + QubitOperator.identity(system.e_nuclear)
    system.sq_hamiltonian = sq_ham
    system.qubit_hamiltonian = qubit_ham
    return qubit_ham


def load_hamiltonian_json(path: str | Path) -> tuple[QubitOperator, int]:
    """Read the JSON qubit-Hamiltonian format:
    {"n_qubits": n, "terms": [{"coeff": [re, im], "paulis": [[q, "X"], ...]}]}.
    """
    data = json.loads(Path(path).read_text())
    n_qubits = int(data["n_qubits"])
    terms = []
    for entry in data["terms"]:
        re_part, im_part = entry["coeff"]
        string = PauliString.from_factors((int(q), axis) for q, axis in entry["paulis"])
        if string.max_qubit() >= n_qubits:
            raise ValueError(f"{path}: term '{string}' outside {n_qubits} qubits")
        terms.append((complex(re_part, im_part), string))
    return QubitOperator(terms), n_qubits


# ---------------------------------------------------------------------------
# Reference preparation
# ---------------------------------------------------------------------------

def reference_circuit(system: MolecularSystem) -> Circuit:
    """X gates on the occupied spin orbitals of the reference determinant."""
    circ = Circuit()
    for q in system.occupied_spin_orbitals():
        circ.add(make_gate("X", q))
    return circ


def prepare_reference(system: MolecularSystem, state: StateVector) -> None:
    """Promote |0...0> to the reference determinant."""
    if state.amplitudes[0] != 1.0 or abs(state.norm() - 1.0) > 1e-12:
        raise ValueError("reference preparation requires a freshly initialized state")
    state.apply_circuit(reference_circuit(system))


# ---------------------------------------------------------------------------
# Operator pools
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PoolEntry:
    """One anti-Hermitian excitation generator kappa = tau - tau^dagger."""

    creators: tuple[int, ...]      # spin orbitals gaining electrons (label order)
    annihilators: tuple[int, ...]  # spin orbitals losing electrons (label order)
    generator: SecondQuantizedOperator
    denominator: float             # Moller-Plesset: sum eps_occ - sum eps_vir
    determinant: int               # excited-determinant bitstring (from the reference)

    @property
    def label(self) -> str:
        occ = " ".join(str(q) for q in sorted(self.annihilators))
        vir = " ".join(str(q) for q in sorted(self.creators))
        return f"{occ} -> {vir}"

    @property
    def rank(self) -> int:
        return len(self.creators)


class OperatorPool:
    """Ordered collection of excitation generators with cached JW images."""

    def __init__(self, entries: list[PoolEntry], kind: str):
        self.entries = entries
        self.kind = kind
        self._jw_cache: dict[int, QubitOperator] = {}

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, idx: int) -> PoolEntry:
        return self.entries[idx]

    def jw_generator(self, idx: int) -> QubitOperator:
        if idx not in self._jw_cache:
            self._jw_cache[idx] = jw_transform(self.entries[idx].generator)
        return self._jw_cache[idx]


_RANK_NAMES = {"S": 1, "SD": 2, "SDT": 3, "SDTQ": 4, "SDTQP": 5, "SDTQPH": 6}


def _spin_z(indices) -> int:
    """Twice the total S_z of a set of spin orbitals (alpha even, beta odd)."""
    return sum(1 if q % 2 == 0 else -1 for q in indices)


def _symmetry_allowed(system: MolecularSystem, indices) -> bool:
    if not system.has_symmetry_labels():
        return True
    label = 0
    for q in indices:
        label ^= system.orbsym[q // 2] - 1
    return label == 0


def _excitation_entry(
    system: MolecularSystem, occ_set: tuple[int, ...], vir_set: tuple[int, ...]
) -> PoolEntry:
    """kappa for tau = a+_{a} a+_{b} ... a_{j} a_{i} on the given index sets."""
    creators = list(vir_set)
    annihilators = list(reversed(occ_set))
    generator = SecondQuantizedOperator()
    generator.add_term(1.0, creators, annihilators)
    generator.add_term(-1.0, list(reversed(annihilators)), list(reversed(creators)))
    denom = sum(system.spin_orbital_energy(i) for i in occ_set) - sum(
        system.spin_orbital_energy(a) for a in vir_set
    )
    det = system.hf_reference
    for i in occ_set:
        det &= ~(1 << i)
    for a in vir_set:
        det |= 1 << a
    return PoolEntry(
        creators=tuple(vir_set),
        annihilators=tuple(occ_set),
        generator=generator,
        denominator=denom,
        determinant=det,
    )


def entry_for_determinant(system: MolecularSystem, determinant: int) -> PoolEntry:
    """Excitation generator carrying the reference onto a target determinant."""
    ref = system.hf_reference
    lost = tuple(q for q in range(system.n_qubits) if (ref >> q) & 1 and not (determinant >> q) & 1)
    gained = tuple(q for q in range(system.n_qubits) if (determinant >> q) & 1 and not (ref >> q) & 1)
    if not lost or len(lost) != len(gained):
        raise ValueError("determinant is not a particle-conserving excitation of the reference")
    return _excitation_entry(system, lost, gained)


def _particle_hole_entries(system: MolecularSystem, max_rank: int) -> list[PoolEntry]:
    occ = system.occupied_spin_orbitals()
    vir = system.virtual_spin_orbitals()
    entries = []
    for rank in range(1, max_rank + 1):
        for occ_set in combinations(occ, rank):
            for vir_set in combinations(vir, rank):
                if _spin_z(occ_set) != _spin_z(vir_set):
                    continue
                if not _symmetry_allowed(system, occ_set + vir_set):
                    continue
                entries.append(_excitation_entry(system, occ_set, vir_set))
    return entries


def _generalized_entries(system: MolecularSystem) -> list[PoolEntry]:
    """Generalized singles and doubles over all spin-orbital pairs."""
    n_so = system.n_qubits
    entries = []
    for p in range(n_so):
        for q in range(p):
            if (p ^ q) & 1:
                continue
            if not _symmetry_allowed(system, (p, q)):
                continue
            entries.append(_excitation_entry(system, (q,), (p,)))
    pairs = [(p, q) for p in range(n_so) for q in range(p)]
    for idx_c, (p, q) in enumerate(pairs):
        for (r, s) in pairs[:idx_c]:
            if _spin_z((p, q)) != _spin_z((r, s)):
                continue
            if not _symmetry_allowed(system, (p, q, r, s)):
                continue
            entries.append(_excitation_entry(system, (s, r), (q, p)))
    return entries


def _paired_double_entries(system: MolecularSystem) -> list[PoolEntry]:
    """Closed-shell pair doubles: both electrons of spatial i move to a."""
    docc = [p for p in range(system.n_spatial)
            if p < system.n_beta]
    virt = [p for p in range(system.n_spatial) if p >= system.n_alpha]
    entries = []
    for i in docc:
        for a in virt:
            generator = SecondQuantizedOperator()
            generator.add_term(1.0, [2 * i + 1, 2 * i], [2 * a, 2 * a + 1])
            generator.add_term(-1.0, [2 * a + 1, 2 * a], [2 * i, 2 * i + 1])
            denom = 2.0 * (system.orbital_energies[i] - system.orbital_energies[a])
            det = system.hf_reference
            det &= ~(1 << (2 * i))
            det &= ~(1 << (2 * i + 1))
            det |= (1 << (2 * a)) | (1 << (2 * a + 1))
            entries.append(
                PoolEntry(
                    creators=(2 * a, 2 * a + 1),
                    annihilators=(2 * i, 2 * i + 1),
                    generator=generator,
                    denominator=float(denom),
                    determinant=det,
                )
            )
    return entries


def build_pool(system: MolecularSystem, kind: str) -> OperatorPool:
    """Excitation pool of the requested family, ordered by the integer value
    of the excited determinant's occupation bitstring (ascending)."""
    name = kind.replace("-", "").replace("_", "")
    if name.upper() in _RANK_NAMES:
        entries = _particle_hole_entries(system, _RANK_NAMES[name.upper()])
    elif name.upper().startswith("RANK"):
        entries = _particle_hole_entries(system, int(name[4:]))
    elif name.upper() == "GSD":
        entries = _generalized_entries(system)
    elif name.lower() in ("pairedd", "pd"):
        entries = _paired_double_entries(system)
    else:
        raise ValueError(f"unknown pool kind '{kind}'")
    entries.sort(key=lambda e: (e.determinant, e.creators, e.annihilators))
    return OperatorPool(entries, kind)
