"""Restricted Hartree-Fock with DIIS and symmetry-clean canonical orbitals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from sto3g import BasisFunction, build_basis, nuclear_repulsion
from integrals import ao_integrals


@dataclass
class ScfResult:
    energy: float                 # total RHF energy
    orbital_energies: np.ndarray
    coefficients: np.ndarray      # AO x MO
    s: np.ndarray
    hcore: np.ndarray
    eri: np.ndarray               # AO chemists' notation
    dipole_z_ao: np.ndarray
    e_nuc: float
    basis: list[BasisFunction]
    atoms: list[tuple[str, tuple[float, float, float]]]
    n_electrons: int
    converged: bool


def _fock(hcore: np.ndarray, eri: np.ndarray, density: np.ndarray) -> np.ndarray:
    j = np.einsum("pqrs,rs->pq", eri, density)
    k = np.einsum("prqs,rs->pq", eri, density)
    return hcore + j - 0.5 * k


def run_rhf(atoms: list[tuple[str, tuple[float, float, float]]],
            n_electrons: int, max_iters: int = 200,
            conv: float = 1e-12) -> ScfResult:
    """Converge RHF for a geometry in bohr; raises on non-convergence."""
    basis = build_basis(atoms)
    s, t, v, dz, eri = ao_integrals(basis, atoms)
    hcore = t + v
    e_nuc = nuclear_repulsion(atoms)
    n_occ = n_electrons // 2

    s_eval, s_evec = np.linalg.eigh(s)
    if np.min(s_eval) < 1e-10:
        raise RuntimeError("overlap matrix is numerically singular")
    x = s_evec @ np.diag(s_eval**-0.5) @ s_evec.T

    def solve_fock(f):
        fp = x.T @ f @ x
        eps, cp = np.linalg.eigh(fp)
        return eps, x @ cp

    eps, c = solve_fock(hcore)
    density = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T
    energy = 0.0
    errors: list[np.ndarray] = []
    focks: list[np.ndarray] = []
    converged = False
    for _ in range(max_iters):
        f = _fock(hcore, eri, density)
        err = f @ density @ s - s @ density @ f
        errors.append(err)
        focks.append(f)
        if len(errors) > 8:
            errors.pop(0)
            focks.pop(0)
        if len(focks) > 1:
            m = len(focks)
            b = -np.ones((m + 1, m + 1))
            b[m, m] = 0.0
            for i in range(m):
                for j in range(m):
                    b[i, j] = np.sum(errors[i] * errors[j])
            rhs = np.zeros(m + 1)
            rhs[m] = -1.0
            try:
                w = np.linalg.solve(b, rhs)[:m]
                f = sum(wi * fi for wi, fi in zip(w, focks))
            except np.linalg.LinAlgError:
                pass
        eps, c = solve_fock(f)
        new_density = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T
        new_energy = 0.5 * np.sum((hcore + _fock(hcore, eri, new_density)) * new_density)
        delta = abs(new_energy - energy)
        drms = np.max(np.abs(new_density - density))
        density, energy = new_density, new_energy
        if delta < conv and drms < 1e-10:
            converged = True
            break
    if not converged:
        raise RuntimeError(f"SCF did not converge in {max_iters} iterations")

    return ScfResult(
        energy=float(energy + e_nuc),
        orbital_energies=eps,
        coefficients=c,
        s=s,
        hcore=hcore,
        eri=eri,
        dipole_z_ao=dz,
        e_nuc=e_nuc,
        basis=basis,
        atoms=atoms,
        n_electrons=n_electrons,
        converged=True,
    )
