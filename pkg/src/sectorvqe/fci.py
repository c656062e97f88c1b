"""Exact diagonalization oracle in the fixed-N, S_z = 0 determinant basis.

The Hamiltonian, S^2, and dipole matrices are assembled with Slater-Condon
rules directly from the spatial integrals, independently of the
fermion-operator/Jordan-Wigner pipeline they are used to check.  Signs
follow the ascending-creation-order convention so a determinant bitmask
coincides with its qubit basis index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .symmetry import determinant_irrep, occupied_indices
from .system import IrrepLabel, MolecularSystem

__all__ = [
    "FciRoot",
    "determinant_basis",
    "solve",
    "sector_minimum",
    "embed_vector",
    "report_csv",
]

DENSE_DIM_LIMIT = 4096
DEGENERACY_TOL = 1e-9


@dataclass
class FciRoot:
    """One eigenpair with its sector classification."""

    index: int
    energy: float
    vector: np.ndarray
    irrep: IrrepLabel
    s2: float
    dipole_z: float | None  # electronic part only


def determinant_basis(sys: MolecularSystem) -> list[int]:
    """All bitmasks with n/2 up and n/2 down electrons, ascending order."""
    n = sys.n_spatial
    n_half = sys.n_electrons // 2
    if n_half > n:
        raise ValueError("more electron pairs than orbitals")

    def subsets(n_orb: int, k: int) -> list[int]:
        out = []

        def rec(start: int, left: int, mask: int) -> None:
            if left == 0:
                out.append(mask)
                return
            for p in range(start, n_orb - left + 1):
                rec(p + 1, left - 1, mask | (1 << p))

        rec(0, k, 0)
        return out

    blocks = subsets(n, n_half)
    dets = sorted(u | (d << n) for u in blocks for d in blocks)
    if len(dets) > DENSE_DIM_LIMIT:
        raise ValueError(
            f"determinant basis dimension {len(dets)} exceeds the dense solver "
            f"limit {DENSE_DIM_LIMIT}; restrict the active space or sector"
        )
    return dets


def _apply_ladder(det: int, index: int, create: bool) -> tuple[int, int] | None:
    """(sign, new det) for one ladder operator, or None when annihilated."""
    bit = 1 << index
    if bool(det & bit) == create:
        return None
    sign = 1 - 2 * ((det & (bit - 1)).bit_count() & 1)
    return sign, det ^ bit


def excitation_element(det: int, cre: tuple[int, ...],
                       ann: tuple[int, ...]) -> tuple[int, int] | None:
    """Sign and target of a+_{P1} a+_{P2} a_{Q2} a_{Q1} |det> (tuples sorted).

    Application order is rightmost-first: annihilators ascending, then
    creators descending — the same convention as ladder_excitation.
    """
    sign = 1
    for q in ann:
        step = _apply_ladder(det, q, False)
        if step is None:
            return None
        s, det = step
        sign *= s
    for p in reversed(cre):
        step = _apply_ladder(det, p, True)
        if step is None:
            return None
        s, det = step
        sign *= s
    return sign, det


def _spin_orbital_integrals(sys: MolecularSystem) -> tuple[np.ndarray, np.ndarray]:
    """(h_so, antisymmetrized <PQ||RS>) over flat spin-orbitals."""
    n = sys.n_spatial
    nso = 2 * n
    h_so = np.zeros((nso, nso))
    h_so[:n, :n] = sys.h1
    h_so[n:, n:] = sys.h1
    # <PQ|RS> = (pr|qs) when spins match pairwise (P,R) and (Q,S)
    coulomb = np.zeros((nso, nso, nso, nso))
    for sp in (0, 1):
        for sq in (0, 1):
            block = sys.h2.transpose(0, 2, 1, 3)  # (pr|qs) -> [p,q,r,s]
            coulomb[
                sp * n:(sp + 1) * n, sq * n:(sq + 1) * n,
                sp * n:(sp + 1) * n, sq * n:(sq + 1) * n,
            ] = block
    anti = coulomb - coulomb.transpose(0, 1, 3, 2)
    return h_so, anti


def hamiltonian_matrix(sys: MolecularSystem, dets: list[int]) -> np.ndarray:
    h_so, anti = _spin_orbital_integrals(sys)
    dim = len(dets)
    index_of = {d: i for i, d in enumerate(dets)}
    occ_lists = [occupied_indices(d) for d in dets]
    mat = np.zeros((dim, dim))

    for i, det in enumerate(dets):
        occ = occ_lists[i]
        diag = sys.core_energy + sum(h_so[p, p] for p in occ)
        for xi, p in enumerate(occ):
            for q in occ[xi + 1:]:
                diag += anti[p, q, p, q]
        mat[i, i] = diag

        # singles
        for p in occ:
            for q in range(2 * sys.n_spatial):
                if (det >> q) & 1:
                    continue
                step = excitation_element(det, (q,), (p,))
                if step is None:
                    continue
                sign, target = step
                j = index_of.get(target)
                if j is None or j <= i:
                    continue
                value = h_so[q, p] + sum(anti[q, r, p, r] for r in occ if r != p)
                mat[j, i] = mat[i, j] = sign * value

        # doubles
        empty = [q for q in range(2 * sys.n_spatial) if not (det >> q) & 1]
        for xi, p1 in enumerate(occ):
            for p2 in occ[xi + 1:]:
                for yi, q1 in enumerate(empty):
                    for q2 in empty[yi + 1:]:
                        step = excitation_element(det, (q1, q2), (p1, p2))
                        if step is None:
                            continue
                        sign, target = step
                        j = index_of.get(target)
                        if j is None or j <= i:
                            continue
                        mat[j, i] = mat[i, j] = sign * anti[q1, q2, p1, p2]
    return mat


def s_squared_matrix(sys: MolecularSystem, dets: list[int]) -> np.ndarray:
    """S^2 = S-S+ on the S_z = 0 block (the Sz(Sz+1) part vanishes)."""
    n = sys.n_spatial
    raised: list[dict[int, int]] = []
    for det in dets:
        images: dict[int, int] = {}
        for p in range(n):
            step = excitation_element(det, (p,), (p + n,))
            if step is None:
                continue
            sign, target = step
            images[target] = images.get(target, 0) + sign
        raised.append(images)
    dim = len(dets)
    mat = np.zeros((dim, dim))
    for i in range(dim):
        for j in range(i, dim):
            value = 0
            for target, si in raised[i].items():
                sj = raised[j].get(target)
                if sj is not None:
                    value += si * sj
            mat[i, j] = mat[j, i] = value
    return mat


def dipole_matrix(sys: MolecularSystem, dets: list[int]) -> np.ndarray:
    """Electronic z-dipole operator -sum d_pq a+_p a_q in the det basis."""
    if sys.dipole_z is None:
        raise ValueError("system carries no dipole integrals")
    n = sys.n_spatial
    nso = 2 * n
    d_so = np.zeros((nso, nso))
    d_so[:n, :n] = sys.dipole_z
    d_so[n:, n:] = sys.dipole_z
    index_of = {d: i for i, d in enumerate(dets)}
    dim = len(dets)
    mat = np.zeros((dim, dim))
    for i, det in enumerate(dets):
        occ = occupied_indices(det)
        mat[i, i] = -sum(d_so[p, p] for p in occ)
        for p in occ:
            for q in range(nso):
                if (det >> q) & 1 or d_so[q, p] == 0.0:
                    continue
                step = excitation_element(det, (q,), (p,))
                if step is None:
                    continue
                sign, target = step
                j = index_of.get(target)
                if j is not None and j > i:
                    mat[j, i] = mat[i, j] = -sign * d_so[q, p]
    return mat


def _resolve_degeneracies(evals: np.ndarray, evecs: np.ndarray,
                          s2_mat: np.ndarray,
                          irrep_bits: np.ndarray) -> np.ndarray:
    """Rotate degenerate clusters to simultaneously diagonalize S^2 and irrep."""
    dim = len(evals)
    start = 0
    while start < dim:
        end = start + 1
        while end < dim and evals[end] - evals[end - 1] < DEGENERACY_TOL:
            end += 1
        if end - start > 1:
            block = evecs[:, start:end]
            s2_block = block.T @ s2_mat @ block
            _, rot = np.linalg.eigh(0.5 * (s2_block + s2_block.T))
            block = block @ rot
            s2_values = np.einsum("ik,ij,jk->k", block, s2_mat, block)
            sub = 0
            while sub < end - start:
                sub_end = sub + 1
                while (sub_end < end - start
                       and abs(s2_values[sub_end] - s2_values[sub]) < 1e-6):
                    sub_end += 1
                if sub_end - sub > 1:
                    piece = block[:, sub:sub_end]
                    for bits in sorted(set(irrep_bits)):
                        proj = (irrep_bits == bits).astype(float)
                        pb = piece.T @ (proj[:, None] * piece)
                        _, rot2 = np.linalg.eigh(0.5 * (pb + pb.T))
                        piece = piece @ rot2
                    block[:, sub:sub_end] = piece
                sub = sub_end
            evecs[:, start:end] = block
        start = end
    return evecs


def solve(sys: MolecularSystem) -> list[FciRoot]:
    """All eigenroots of the S_z = 0, N-electron block, ascending energy."""
    dets = determinant_basis(sys)
    ham = hamiltonian_matrix(sys, dets)
    evals, evecs = np.linalg.eigh(ham)
    s2_mat = s_squared_matrix(sys, dets)
    irrep_bits = np.array(
        [determinant_irrep(d, sys.irreps).bits for d in dets]
    )
    evecs = _resolve_degeneracies(evals, evecs, s2_mat, irrep_bits)
    dip_mat = dipole_matrix(sys, dets) if sys.dipole_z is not None else None

    roots = []
    for k in range(len(evals)):
        vec = evecs[:, k]
        pivot = int(np.argmax(np.abs(vec)))
        if vec[pivot] < 0:
            vec = -vec
        s2 = float(vec @ s2_mat @ vec)
        weights = np.zeros(max(irrep_bits) + 1)
        np.add.at(weights, irrep_bits, vec**2)
        bits = int(np.argmax(weights))
        if weights[bits] < 1.0 - 1e-10:
            raise RuntimeError(
                f"root {k} is not supported on a single irrep sector "
                f"(weights {weights})"
            )
        dipole = float(vec @ dip_mat @ vec) if dip_mat is not None else None
        roots.append(
            FciRoot(
                index=k,
                energy=float(evals[k]),
                vector=vec,
                irrep=IrrepLabel(sys.point_group, bits),
                s2=s2,
                dipole_z=dipole,
            )
        )
    return roots


def sector_minimum(roots: list[FciRoot], sigma: IrrepLabel, spin: int) -> FciRoot:
    """Lowest root with the given irrep and S within the eigenlist."""
    target = spin * (spin + 1)
    matches = [
        r for r in roots
        if r.irrep.bits == sigma.bits and abs(r.s2 - target) < 1e-6
    ]
    if not matches:
        raise ValueError(f"no root in sector ({sigma.name}, S={spin})")
    return min(matches, key=lambda r: r.energy)


def embed_vector(vector: np.ndarray, dets: list[int], n_qubits: int) -> np.ndarray:
    """Lift a determinant-basis vector into full-register amplitudes."""
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[np.array(dets)] = vector
    return amps


def report_csv(roots: list[FciRoot]) -> str:
    lines = ["root,energy,irrep,s2,dipole_z"]
    for r in roots:
        dip = f"{r.dipole_z:.12g}" if r.dipole_z is not None else ""
        lines.append(f"{r.index},{r.energy:.12g},{r.irrep.name},{r.s2:.12g},{dip}")
    return "\n".join(lines) + "\n"
