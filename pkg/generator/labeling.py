"""C2v irrep classification of canonical molecular orbitals.

The symmetry operations are realized as signed permutations of the AO
basis (the molecules sit in the yz plane with the C2 axis along z).
Quasi-degenerate orbitals are rotated to symmetry eigenvectors first, and
every orbital's sign is fixed by the largest-coefficient-positive rule so
regenerated dumps are bit-identical.
"""

from __future__ import annotations

import numpy as np

from sto3g import BasisFunction

# character rows (C2z, sigma_xz, sigma_yz) -> C2v label
_CHARACTERS = {
    (1, 1, 1): "A1",
    (1, -1, -1): "A2",
    (-1, 1, -1): "B1",
    (-1, -1, 1): "B2",
}

_OPS = {
    "C2z": np.diag([-1.0, -1.0, 1.0]),
    "sxz": np.diag([1.0, -1.0, 1.0]),
    "syz": np.diag([-1.0, 1.0, 1.0]),
}


def ao_representation(basis: list[BasisFunction],
                      atoms: list[tuple[str, tuple[float, float, float]]],
                      op: np.ndarray) -> np.ndarray:
    """Signed permutation matrix of the AO basis under a point-group op."""
    n = len(basis)
    rep = np.zeros((n, n))
    centers = [np.asarray(c) for _, c in atoms]
    for j, f in enumerate(basis):
        new_center = op @ np.asarray(f.center)
        target_atom = None
        for k, c in enumerate(centers):
            if np.linalg.norm(new_center - c) < 1e-8:
                target_atom = k
                break
        if target_atom is None:
            raise RuntimeError("geometry is not C2v symmetric")
        sign = 1.0
        for d in range(3):
            if f.powers[d] % 2 == 1:
                sign *= op[d, d]
        # locate the matching function on the target atom
        for i, g in enumerate(basis):
            if (g.atom_index == target_atom and g.powers == f.powers
                    and g.primitives == f.primitives):
                rep[i, j] = sign
                break
        else:
            raise RuntimeError("AO image not found under symmetry operation")
    return rep


def symmetrize_orbitals(c: np.ndarray, eps: np.ndarray, s: np.ndarray,
                        reps: dict[str, np.ndarray],
                        degeneracy_tol: float = 1e-8) -> np.ndarray:
    """Rotate quasi-degenerate orbitals into symmetry eigenvectors."""
    c = c.copy()
    n = c.shape[1]
    start = 0
    while start < n:
        end = start + 1
        while end < n and eps[end] - eps[end - 1] < degeneracy_tol:
            end += 1
        if end - start > 1:
            block = c[:, start:end]
            for rep in reps.values():
                m = block.T @ s @ rep @ block
                _, rot = np.linalg.eigh(0.5 * (m + m.T))
                block = block @ rot
            c[:, start:end] = block
        start = end
    return c


def fix_signs(c: np.ndarray) -> np.ndarray:
    c = c.copy()
    for k in range(c.shape[1]):
        pivot = int(np.argmax(np.abs(c[:, k])))
        if c[pivot, k] < 0:
            c[:, k] = -c[:, k]
    return c


def classify(c: np.ndarray, s: np.ndarray,
             reps: dict[str, np.ndarray]) -> list[str]:
    """C2v label per orbital; raises when an orbital is not symmetry-pure."""
    labels = []
    for k in range(c.shape[1]):
        chars = []
        for name in ("C2z", "sxz", "syz"):
            val = float(c[:, k] @ s @ reps[name] @ c[:, k])
            if abs(abs(val) - 1.0) > 1e-6:
                raise RuntimeError(
                    f"orbital {k} is not symmetry-adapted (<{name}> = {val:.6f})"
                )
            chars.append(int(np.sign(val)))
        labels.append(_CHARACTERS[tuple(chars)])
    return labels


def label_orbitals(scf_result) -> tuple[np.ndarray, list[str]]:
    """Symmetry-cleaned, sign-fixed coefficients plus per-MO C2v labels."""
    reps = {
        name: ao_representation(scf_result.basis, scf_result.atoms, op)
        for name, op in _OPS.items()
    }
    c = symmetrize_orbitals(
        scf_result.coefficients, scf_result.orbital_energies, scf_result.s, reps
    )
    c = fix_signs(c)
    return c, classify(c, scf_result.s, reps)
