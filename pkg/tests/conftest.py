"""Shared fixtures: toy molecular systems and committed dump fixtures."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from sectorvqe.system import (
    IrrepLabel,
    MolecularSystem,
    hartree_fock_energy,
    serialize_system,
)

FIXTURES = Path(__file__).parent / "fixtures"


def make_system(n_spatial, n_electrons, h1, h2_entries, irreps, group="C2v",
                core_energy=0.0, dipole=None, nuclear_dipole_z=0.0):
    """Assemble a MolecularSystem from unique chemists'-notation entries."""
    h1 = np.asarray(h1, dtype=float)
    h2 = np.zeros((n_spatial,) * 4)
    for (p, q, r, s), v in h2_entries.items():
        for i, j in ((p, q), (q, p)):
            for k, l in ((r, s), (s, r)):
                h2[i, j, k, l] = v
                h2[k, l, i, j] = v
    labels = tuple(IrrepLabel.from_name(group, name) for name in irreps)
    sys = MolecularSystem(
        n_spatial=n_spatial,
        n_electrons=n_electrons,
        core_energy=core_energy,
        h1=h1,
        h2=h2,
        irreps=labels,
        point_group=group,
        hf_energy=0.0,
        dipole_z=None if dipole is None else np.asarray(dipole, dtype=float),
        nuclear_dipole_z=nuclear_dipole_z,
    )
    # fill the header energy with the actual HF value so cross-checks hold
    return MolecularSystem(
        n_spatial=sys.n_spatial,
        n_electrons=sys.n_electrons,
        core_energy=sys.core_energy,
        h1=sys.h1,
        h2=sys.h2,
        irreps=sys.irreps,
        point_group=sys.point_group,
        hf_energy=hartree_fock_energy(sys),
        dipole_z=sys.dipole_z,
        nuclear_dipole_z=sys.nuclear_dipole_z,
    )


@pytest.fixture(scope="session")
def h2_system():
    """H2/STO-3G-like MO integrals (R = 1.4 bohr), irreps [A1, B2].

    Textbook minimal-basis values; the sigma-u orbital picks up B2 with
    the molecule on the y axis.
    """
    return make_system(
        n_spatial=2,
        n_electrons=2,
        h1=[[-1.2528, 0.0], [0.0, -0.4756]],
        h2_entries={
            (0, 0, 0, 0): 0.6746,
            (1, 1, 1, 1): 0.6975,
            (0, 0, 1, 1): 0.6636,
            (0, 1, 0, 1): 0.1813,
        },
        irreps=["A1", "B2"],
        core_energy=1.0 / 1.4,
        dipole=[[0.0, 0.21], [0.21, 0.0]],
    )


@pytest.fixture(scope="session")
def h2_dump(h2_system, tmp_path_factory):
    path = tmp_path_factory.mktemp("dumps") / "h2.dump"
    serialize_system(h2_system, path)
    return path


@pytest.fixture(scope="session")
def hubbard1_system():
    """Single orbital with h = -1 and (00|00) = 0.5 (Hubbard atom)."""
    return make_system(
        n_spatial=1,
        n_electrons=2,
        h1=[[-1.0]],
        h2_entries={(0, 0, 0, 0): 0.5},
        irreps=["A1"],
    )


@pytest.fixture(scope="session")
def toy3_system():
    """3 orbitals, 4 electrons, irreps [A1, B1, A1]; small random-ish integrals.

    Values chosen symmetric and modest so HF is a sane reference; all
    sector energies come from the dense oracle, never from literature.
    """
    rng = np.random.default_rng(7)
    n = 3
    h1 = np.diag([-2.0, -1.0, -0.3])
    h1 += 0.05 * (lambda m: m + m.T)(rng.normal(size=(n, n)))
    # symmetry-forbidden h1 elements (A1 x B1) must vanish
    h1[0, 1] = h1[1, 0] = h1[1, 2] = h1[2, 1] = 0.0
    h2 = np.zeros((n, n, n, n))
    bits = [0, 1, 0]
    for p in range(n):
        for q in range(p + 1):
            for r in range(n):
                for s in range(r + 1):
                    if (p, q) < (r, s):
                        continue
                    if bits[p] ^ bits[q] ^ bits[r] ^ bits[s]:
                        continue
                    v = 0.1 * rng.normal() + (0.4 if (p == q and r == s) else 0.0)
                    for i, j in ((p, q), (q, p)):
                        for k, l in ((r, s), (s, r)):
                            h2[i, j, k, l] = v
                            h2[k, l, i, j] = v
    labels = tuple(IrrepLabel.from_name("C2v", x) for x in ["A1", "B1", "A1"])
    base = MolecularSystem(
        n_spatial=n, n_electrons=4, core_energy=0.7, h1=h1, h2=h2,
        irreps=labels, point_group="C2v", hf_energy=0.0,
        dipole_z=np.diag([0.3, -0.2, 0.5]),
    )
    return MolecularSystem(
        n_spatial=n, n_electrons=4, core_energy=0.7, h1=h1, h2=h2,
        irreps=labels, point_group="C2v",
        hf_energy=hartree_fock_energy(base),
        dipole_z=base.dipole_z,
    )


@pytest.fixture(scope="session")
def stationary2_system():
    """2 orbitals, both A1, with zero off-diagonal couplings.

    The Fock matrix is diagonal and the HF-double coupling (01|01) is
    zero, so the HF determinant is an exact eigenvector while the
    single-determinant pool stays nonempty.
    """
    return make_system(
        n_spatial=2,
        n_electrons=2,
        h1=[[-1.0, 0.0], [0.0, -0.3]],
        h2_entries={
            (0, 0, 0, 0): 0.6,
            (1, 1, 1, 1): 0.7,
            (0, 0, 1, 1): 0.5,
        },
        irreps=["A1", "A1"],
    )


@pytest.fixture(scope="session")
def toy5_system():
    """5 orbitals, 4 electrons, irreps [A1, B1, A1, A1, B1].

    Orbitals 3 (A1) and 4 (B1) stay empty in both reference determinants
    of the B1 target, so the pool exhibits the full class structure:
    core->virtual case-I pairs, paired-double singletons, and the
    redundant open-shell doubles of the same creation pair.
    """
    rng = np.random.default_rng(19)
    n = 5
    bits = [0, 1, 0, 0, 1]
    h1 = np.diag([-2.0, -1.0, -0.4, 0.2, 0.5])
    sym = 0.05 * (lambda m: m + m.T)(rng.normal(size=(n, n)))
    for p in range(n):
        for q in range(n):
            if bits[p] == bits[q] and p != q:
                h1[p, q] += sym[p, q]
    h2 = np.zeros((n, n, n, n))
    for p in range(n):
        for q in range(p + 1):
            for r in range(n):
                for s in range(r + 1):
                    if (p, q) < (r, s):
                        continue
                    if bits[p] ^ bits[q] ^ bits[r] ^ bits[s]:
                        continue
                    v = 0.08 * rng.normal() + (0.35 if (p == q and r == s) else 0.0)
                    for i, j in ((p, q), (q, p)):
                        for k, l in ((r, s), (s, r)):
                            h2[i, j, k, l] = v
                            h2[k, l, i, j] = v
    labels = tuple(
        IrrepLabel.from_name("C2v", x) for x in ["A1", "B1", "A1", "A1", "B1"]
    )
    base = MolecularSystem(
        n_spatial=n, n_electrons=4, core_energy=1.1, h1=h1, h2=h2,
        irreps=labels, point_group="C2v", hf_energy=0.0,
        dipole_z=np.diag([0.25, -0.15, 0.4, -0.05, 0.1]),
    )
    return MolecularSystem(
        n_spatial=n, n_electrons=4, core_energy=1.1, h1=h1, h2=h2,
        irreps=labels, point_group="C2v",
        hf_energy=hartree_fock_energy(base),
        dipole_z=base.dipole_z,
    )


def fixture_dump(name: str) -> Path:
    path = FIXTURES / name
    if not path.is_file():
        pytest.skip(f"missing committed fixture {name}")
    return path
