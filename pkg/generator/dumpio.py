"""Frozen-core folding, MO-basis transformation, and dump-file emission.

The emitted format is the text contract consumed by the solver package:
header, ORBSYM line, chemists'-notation records, dipole block, core
energy, and nuclear z-dipole (with the frozen-core electronic dipole
constant folded in).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from sto3g import nuclear_dipole_z


def mo_transform(scf, c: np.ndarray):
    h_mo = c.T @ scf.hcore @ c
    d_mo = c.T @ scf.dipole_z_ao @ c
    eri_mo = np.einsum("pqrs,pi,qj,rk,sl->ijkl", scf.eri, c, c, c, c, optimize=True)
    return h_mo, d_mo, eri_mo


def freeze_core(h_mo: np.ndarray, eri_mo: np.ndarray, d_mo: np.ndarray,
                e_nuc: float, n_frozen: int):
    """Fold the lowest n_frozen doubly-occupied orbitals into constants.

    Returns (core_energy, active h1, active eri, active dipole,
    frozen-core electronic z-dipole).
    """
    core = list(range(n_frozen))
    e_core = e_nuc
    for c1 in core:
        e_core += 2.0 * h_mo[c1, c1]
        for c2 in core:
            e_core += 2.0 * eri_mo[c1, c1, c2, c2] - eri_mo[c1, c2, c1, c2]
    n = h_mo.shape[0]
    active = list(range(n_frozen, n))
    h_eff = h_mo[np.ix_(active, active)].copy()
    for i, p in enumerate(active):
        for j, q in enumerate(active):
            for c1 in core:
                h_eff[i, j] += 2.0 * eri_mo[p, q, c1, c1] - eri_mo[p, c1, c1, q]
    eri_act = eri_mo[np.ix_(active, active, active, active)].copy()
    d_act = d_mo[np.ix_(active, active)].copy()
    core_dipole = -2.0 * sum(d_mo[c1, c1] for c1 in core)
    return float(e_core), h_eff, eri_act, d_act, float(core_dipole)


def active_hf_energy(core_energy: float, h1: np.ndarray, eri: np.ndarray,
                     n_active_electrons: int) -> float:
    occ = range(n_active_electrons // 2)
    e = core_energy + 2.0 * sum(h1[i, i] for i in occ)
    for i in occ:
        for j in occ:
            e += 2.0 * eri[i, i, j, j] - eri[i, j, i, j]
    return float(e)


def write_dump(path: str | Path, *, h1: np.ndarray, eri: np.ndarray,
               dipole: np.ndarray, core_energy: float, nuclear_dip: float,
               orbsym: list[str], n_electrons: int, group: str,
               hf_energy: float, comments: list[str],
               threshold: float = 1e-14) -> None:
    n = h1.shape[0]
    lines = [
        f"&SYS NORB={n} NELEC={n_electrons} GROUP={group} EHF={float(hf_energy)!r}"
    ]
    lines.extend(f"# {c}" for c in comments)
    lines.append("ORBSYM=" + ",".join(orbsym))
    emitted = set()
    for p in range(n):
        for q in range(p + 1):
            for r in range(n):
                for s in range(r + 1):
                    pq = (p, q)
                    rs = (r, s)
                    key = (max(pq, rs), min(pq, rs))
                    if key in emitted:
                        continue
                    emitted.add(key)
                    v = eri[p, q, r, s]
                    if abs(v) > threshold:
                        lines.append(f"{float(v)!r} {p + 1} {q + 1} {r + 1} {s + 1}")
    for p in range(n):
        for q in range(p + 1):
            v = h1[p, q]
            if abs(v) > threshold:
                lines.append(f"{float(v)!r} {p + 1} {q + 1} 0 0")
    for p in range(n):
        v = dipole[p, p]
        if abs(v) > threshold:
            lines.append(f"{float(v)!r} {p + 1} 0 0 0")
    for p in range(n):
        for q in range(p):
            v = dipole[p, q]
            if abs(v) > threshold:
                lines.append(f"{float(v)!r} {p + 1} {q + 1} -1 -1")
    lines.append(f"{float(core_energy)!r} 0 0 0 0")
    lines.append(f"{float(nuclear_dip)!r} 0 0 0 -1")
    Path(path).write_text("\n".join(lines) + "\n")


def emit_system(path: str | Path, scf, c: np.ndarray, orbsym: list[str],
                n_frozen: int, comments: list[str]) -> None:
    """Transform, fold the core, sanity-check the HF energy, and write."""
    h_mo, d_mo, eri_mo = mo_transform(scf, c)
    core_energy, h1, eri, dip, core_dip = freeze_core(
        h_mo, eri_mo, d_mo, scf.e_nuc, n_frozen
    )
    n_active_electrons = scf.n_electrons - 2 * n_frozen
    check = active_hf_energy(core_energy, h1, eri, n_active_electrons)
    if abs(check - scf.energy) > 1e-8:
        raise RuntimeError(
            f"frozen-core folding broke the HF energy: {check} vs {scf.energy}"
        )
    nuclear_dip = nuclear_dipole_z(scf.atoms) + core_dip
    write_dump(
        path,
        h1=h1,
        eri=eri,
        dipole=dip,
        core_energy=core_energy,
        nuclear_dip=nuclear_dip,
        orbsym=orbsym[n_frozen:],
        n_electrons=n_active_electrons,
        group="C2v",
        hf_energy=scf.energy,
        comments=comments,
    )
