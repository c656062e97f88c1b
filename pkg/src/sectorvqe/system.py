"""Molecular-system model: integral dump parsing, irrep labels, HF energy.

The on-disk format is an FCIDUMP-style text dump extended with a symmetry
line and a z-dipole block:

    &SYS NORB=<n> NELEC=<n> GROUP=<tag> EHF=<float>
    ORBSYM=<label>,<label>,...
    <value> p q r s     # two-electron integral (pq|rs), 1-based, chemists'
    <value> p q 0 0     # one-electron integral h_pq
    <value> p 0 0 0     # diagonal z-dipole d_pp
    <value> p q -1 -1   # general z-dipole d_pq
    <value> 0 0 0 0     # core energy (nuclear repulsion + frozen core)
    <value> 0 0 0 -1    # nuclear z-dipole

Lines starting with '#' are comments.  Unlisted integrals are zero, and
every stored integral is expanded to its full permutational image
(8-fold for two-electron, symmetric for one-electron and dipole).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "POINT_GROUPS",
    "IrrepLabel",
    "MolecularSystem",
    "DumpParseError",
    "DumpValidationError",
    "irrep_product",
    "parse_system",
    "serialize_system",
    "hartree_fock_energy",
]

# Irreps of the real Abelian point groups, encoded so that the direct
# product is the XOR of the bit labels (Cotton ordering rearranged where
# needed to make the encoding multiplicative).
POINT_GROUPS: dict[str, tuple[str, ...]] = {
    "C1": ("A",),
    "Ci": ("Ag", "Au"),
    "Cs": ("Ap", "App"),
    "C2": ("A", "B"),
    "C2v": ("A1", "B1", "B2", "A2"),
    "C2h": ("Ag", "Bg", "Au", "Bu"),
    "D2": ("A", "B1", "B2", "B3"),
    "D2h": ("Ag", "B1g", "B2g", "B3g", "Au", "B1u", "B2u", "B3u"),
}

SYMMETRY_TOL = 1e-10


class DumpParseError(ValueError):
    """Malformed dump file (reported with a line number)."""


class DumpValidationError(ValueError):
    """Structurally valid dump whose contents violate a system invariant."""


@dataclass(frozen=True)
class IrrepLabel:
    """Irrep of a real Abelian point group as an XOR-multiplicative bit label."""

    group: str
    bits: int

    def __post_init__(self) -> None:
        names = POINT_GROUPS.get(self.group)
        if names is None:
            raise ValueError(f"unknown point group {self.group!r}")
        if not 0 <= self.bits < len(names):
            raise ValueError(f"bit label {self.bits} out of range for {self.group}")

    @classmethod
    def from_name(cls, group: str, name: str) -> IrrepLabel:
        names = POINT_GROUPS.get(group)
        if names is None:
            raise ValueError(f"unknown point group {group!r}")
        try:
            return cls(group, names.index(name))
        except ValueError:
            raise ValueError(f"{name!r} is not an irrep of {group}") from None

    @property
    def name(self) -> str:
        return POINT_GROUPS[self.group][self.bits]

    @property
    def is_totally_symmetric(self) -> bool:
        return self.bits == 0

    def __mul__(self, other: IrrepLabel) -> IrrepLabel:
        return irrep_product(self, other)

    def __repr__(self) -> str:
        return f"IrrepLabel({self.group}:{self.name})"


def irrep_product(a: IrrepLabel, b: IrrepLabel) -> IrrepLabel:
    """Direct product of two irreps of the same Abelian group (XOR of labels)."""
    if a.group != b.group:
        raise ValueError(f"irrep product across groups {a.group} and {b.group}")
    return IrrepLabel(a.group, a.bits ^ b.bits)


def totally_symmetric(group: str) -> IrrepLabel:
    return IrrepLabel(group, 0)


@dataclass(frozen=True)
class MolecularSystem:
    """Active-space electronic-structure data for one geometry.

    All integrals are in Hartree over spatial orbitals: ``h1`` is the
    (effective, frozen-core folded) one-electron matrix, ``h2`` the
    two-electron tensor in chemists' notation (pq|rs) with the full 8-fold
    permutational symmetry materialized.  ``dipole_z`` holds z-dipole
    one-electron integrals in atomic units, or None when the dump carries
    no dipole block.
    """

    n_spatial: int
    n_electrons: int
    core_energy: float
    h1: np.ndarray
    h2: np.ndarray
    irreps: tuple[IrrepLabel, ...]
    point_group: str
    hf_energy: float
    dipole_z: np.ndarray | None = None
    nuclear_dipole_z: float = 0.0

    def __post_init__(self) -> None:
        n = self.n_spatial
        if self.h1.shape != (n, n):
            raise DumpValidationError(f"h1 shape {self.h1.shape} != ({n}, {n})")
        if self.h2.shape != (n, n, n, n):
            raise DumpValidationError(f"h2 shape {self.h2.shape} incompatible with NORB={n}")
        if len(self.irreps) != n:
            raise DumpValidationError(
                f"ORBSYM has {len(self.irreps)} labels for NORB={n}"
            )
        for label in self.irreps:
            if label.group != self.point_group:
                raise DumpValidationError(
                    f"irrep {label} does not belong to group {self.point_group}"
                )
        if not 0 < self.n_electrons <= 2 * n:
            raise DumpValidationError(f"NELEC={self.n_electrons} out of range")
        if self.n_electrons % 2 != 0:
            raise DumpValidationError("only closed-shell electron counts are supported")
        if not np.allclose(self.h1, self.h1.T, atol=1e-12):
            raise DumpValidationError("h1 is not symmetric")
        for perm in ((1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)):
            if not np.allclose(self.h2, self.h2.transpose(perm), atol=1e-12):
                raise DumpValidationError("h2 violates 8-fold permutational symmetry")
        if self.dipole_z is not None and not np.allclose(
            self.dipole_z, self.dipole_z.T, atol=1e-12
        ):
            raise DumpValidationError("dipole_z is not symmetric")

    @property
    def n_qubits(self) -> int:
        return 2 * self.n_spatial

    @property
    def n_occupied(self) -> int:
        return self.n_electrons // 2

    def irrep(self, name_or_bits: str | int) -> IrrepLabel:
        """Resolve an irrep of this system's point group by name or bit label."""
        if isinstance(name_or_bits, str):
            return IrrepLabel.from_name(self.point_group, name_or_bits)
        return IrrepLabel(self.point_group, name_or_bits)


def _canonical_h2_key(p: int, q: int, r: int, s: int) -> tuple[int, int, int, int]:
    pq = (max(p, q), min(p, q))
    rs = (max(r, s), min(r, s))
    if pq < rs:
        pq, rs = rs, pq
    return (*pq, *rs)


def parse_system(path: str | Path) -> MolecularSystem:
    """Parse a dump file into a validated MolecularSystem.

    Raises DumpParseError for malformed lines (with line number) and
    DumpValidationError when duplicated records disagree beyond 1e-10 or
    header metadata is inconsistent.
    """
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines:
        raise DumpParseError(f"{path}: empty dump file")

    header: dict[str, str] = {}
    orbsym: list[str] | None = None
    records: list[tuple[int, float, int, int, int, int]] = []

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("&SYS"):
            for token in line[4:].split():
                if "=" not in token:
                    raise DumpParseError(f"{path}:{lineno}: bad header token {token!r}")
                key, _, value = token.partition("=")
                header[key.strip().upper()] = value.strip()
            continue
        if line.upper().startswith("ORBSYM="):
            orbsym = [s.strip() for s in line.partition("=")[2].split(",") if s.strip()]
            continue
        fields = line.split()
        if len(fields) != 5:
            raise DumpParseError(
                f"{path}:{lineno}: expected '<value> p q r s', got {line!r}"
            )
        try:
            value = float(fields[0])
            p, q, r, s = (int(f) for f in fields[1:])
        except ValueError as exc:
            raise DumpParseError(f"{path}:{lineno}: {exc}") from None
        records.append((lineno, value, p, q, r, s))

    for key in ("NORB", "NELEC", "GROUP", "EHF"):
        if key not in header:
            raise DumpParseError(f"{path}: header is missing {key}")
    try:
        n = int(header["NORB"])
        n_elec = int(header["NELEC"])
        ehf = float(header["EHF"])
    except ValueError as exc:
        raise DumpParseError(f"{path}: bad header value: {exc}") from None
    group = header["GROUP"]
    if group not in POINT_GROUPS:
        raise DumpValidationError(f"{path}: unsupported point group {group!r}")
    if orbsym is None:
        raise DumpParseError(f"{path}: missing ORBSYM line")
    if len(orbsym) != n:
        raise DumpValidationError(
            f"{path}: ORBSYM lists {len(orbsym)} labels, NORB={n}"
        )
    try:
        irreps = tuple(IrrepLabel.from_name(group, name) for name in orbsym)
    except ValueError as exc:
        raise DumpValidationError(f"{path}: {exc}") from None

    h1 = np.zeros((n, n))
    h2 = np.zeros((n, n, n, n))
    dip = np.zeros((n, n))
    core_energy = 0.0
    nuclear_dipole_z = 0.0
    has_dipole = False
    seen: dict[tuple, tuple[int, float]] = {}

    def record_value(kind: tuple, lineno: int, value: float) -> bool:
        prior = seen.get(kind)
        if prior is not None and abs(prior[1] - value) > SYMMETRY_TOL:
            raise DumpValidationError(
                f"{path}:{lineno}: record conflicts with line {prior[0]} "
                f"({value!r} vs {prior[1]!r})"
            )
        if prior is None:
            seen[kind] = (lineno, value)
            return True
        return False

    for lineno, value, p, q, r, s in records:
        if (p, q, r, s) == (0, 0, 0, 0):
            if record_value(("core",), lineno, value):
                core_energy = value
        elif (p, q, r, s) == (0, 0, 0, -1):
            if record_value(("nucdip",), lineno, value):
                nuclear_dipole_z = value
        elif p > 0 and q == 0 and r == 0 and s == 0:
            if p > n:
                raise DumpParseError(f"{path}:{lineno}: orbital index {p} > NORB")
            if record_value(("dip", p - 1, p - 1), lineno, value):
                dip[p - 1, p - 1] = value
                has_dipole = True
        elif p > 0 and q > 0 and r == -1 and s == -1:
            if p > n or q > n:
                raise DumpParseError(f"{path}:{lineno}: orbital index > NORB")
            i, j = max(p, q) - 1, min(p, q) - 1
            if record_value(("dip", i, j), lineno, value):
                dip[i, j] = dip[j, i] = value
                has_dipole = True
        elif p > 0 and q > 0 and r == 0 and s == 0:
            if p > n or q > n:
                raise DumpParseError(f"{path}:{lineno}: orbital index > NORB")
            i, j = max(p, q) - 1, min(p, q) - 1
            if record_value(("h1", i, j), lineno, value):
                h1[i, j] = h1[j, i] = value
        elif p > 0 and q > 0 and r > 0 and s > 0:
            if max(p, q, r, s) > n:
                raise DumpParseError(f"{path}:{lineno}: orbital index > NORB")
            key = _canonical_h2_key(p - 1, q - 1, r - 1, s - 1)
            if record_value(("h2", *key), lineno, value):
                a, b, c, d = p - 1, q - 1, r - 1, s - 1
                for i, j in ((a, b), (b, a)):
                    for k, l in ((c, d), (d, c)):
                        h2[i, j, k, l] = value
                        h2[k, l, i, j] = value
        else:
            raise DumpParseError(
                f"{path}:{lineno}: unrecognized index pattern ({p} {q} {r} {s})"
            )

    return MolecularSystem(
        n_spatial=n,
        n_electrons=n_elec,
        core_energy=core_energy,
        h1=h1,
        h2=h2,
        irreps=irreps,
        point_group=group,
        hf_energy=ehf,
        dipole_z=dip if has_dipole else None,
        nuclear_dipole_z=nuclear_dipole_z,
    )


def serialize_system(sys: MolecularSystem, path: str | Path,
                     comments: tuple[str, ...] = ()) -> None:
    """Write a dump file that parses back to `sys` with bit-exact values."""
    n = sys.n_spatial
    out = [
        f"&SYS NORB={n} NELEC={sys.n_electrons} GROUP={sys.point_group} "
        f"EHF={float(sys.hf_energy)!r}"
    ]
    out.extend(f"# {c}" for c in comments)
    out.append("ORBSYM=" + ",".join(label.name for label in sys.irreps))

    emitted: set[tuple[int, int, int, int]] = set()
    for p in range(n):
        for q in range(p + 1):
            for r in range(n):
                for s in range(r + 1):
                    key = _canonical_h2_key(p, q, r, s)
                    if key in emitted:
                        continue
                    emitted.add(key)
                    v = sys.h2[p, q, r, s]
                    if v != 0.0:
                        out.append(f"{float(v)!r} {p + 1} {q + 1} {r + 1} {s + 1}")
    for p in range(n):
        for q in range(p + 1):
            v = sys.h1[p, q]
            if v != 0.0:
                out.append(f"{float(v)!r} {p + 1} {q + 1} 0 0")
    if sys.dipole_z is not None:
        for p in range(n):
            v = sys.dipole_z[p, p]
            if v != 0.0:
                out.append(f"{float(v)!r} {p + 1} 0 0 0")
        for p in range(n):
            for q in range(p):
                v = sys.dipole_z[p, q]
                if v != 0.0:
                    out.append(f"{float(v)!r} {p + 1} {q + 1} -1 -1")
    out.append(f"{float(sys.core_energy)!r} 0 0 0 0")
    if sys.dipole_z is not None or sys.nuclear_dipole_z != 0.0:
        out.append(f"{float(sys.nuclear_dipole_z)!r} 0 0 0 -1")
    Path(path).write_text("\n".join(out) + "\n")


def hartree_fock_energy(sys: MolecularSystem) -> float:
    """Closed-shell HF energy from the parsed active-space integrals.

    The lowest n_electrons/2 orbitals (dump order) are doubly occupied:
    E = core + 2 sum_i h_ii + sum_ij [2(ii|jj) - (ij|ij)].
    """
    occ = range(sys.n_occupied)
    e = sys.core_energy + 2.0 * sum(sys.h1[i, i] for i in occ)
    for i in occ:
        for j in occ:
            e += 2.0 * sys.h2[i, i, j, j] - sys.h2[i, j, i, j]
    return float(e)
