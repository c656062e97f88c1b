"""Determinant symmetry labels and symmetry-adapted reference selection.

A determinant is an occupation bitmask over the 2*n_spatial qubit register
(up block low, down block high).  The target state is specified by a
spatial irrep Sigma and a spin S in {0, 1}; for anything beyond the plain
closed-shell case the reference is the pair of open-shell determinants
phi_A (electron moved m-up -> e-up) and phi_B (m-down -> e-down).
"""

from __future__ import annotations

from dataclasses import dataclass

from .system import IrrepLabel, MolecularSystem

__all__ = [
    "SectorUnreachableError",
    "StateSpec",
    "determinant_irrep",
    "hf_determinant",
    "build_reference",
    "occupied_indices",
]

SINGLET, TRIPLET = 0, 1


class SectorUnreachableError(ValueError):
    """No (m, e) orbital pair realizes the requested irrep."""


def occupied_indices(det: int) -> list[int]:
    return [i for i in range(det.bit_length()) if (det >> i) & 1]


def determinant_irrep(det: int, irreps: tuple[IrrepLabel, ...]) -> IrrepLabel:
    """XOR product of the irreps of all occupied spin-orbitals."""
    n = len(irreps)
    group = irreps[0].group
    bits = 0
    for flat in occupied_indices(det):
        bits ^= irreps[flat % n].bits
    return IrrepLabel(group, bits)


def hf_determinant(sys: MolecularSystem) -> int:
    """Closed-shell HF bitmask: lowest n_electrons/2 orbitals doubly occupied."""
    filled = (1 << sys.n_occupied) - 1
    return filled | (filled << sys.n_spatial)


@dataclass(frozen=True)
class StateSpec:
    """Target sector plus its two-determinant reference.

    `m` is the vacated doubly-occupied orbital and `e` the populated
    virtual; both are None in single-determinant mode (totally symmetric
    singlet straight from HF).
    """

    sigma: IrrepLabel
    spin: int
    m: int | None
    e: int | None
    phi_A: int
    phi_B: int
    n_spatial: int
    n_electrons: int

    @property
    def n_qubits(self) -> int:
        return 2 * self.n_spatial

    @property
    def single_determinant(self) -> bool:
        return self.m is None

    @property
    def s_squared_target(self) -> float:
        return float(self.spin * (self.spin + 1))


def _pair_candidates(sigma: IrrepLabel, sys: MolecularSystem,
                     hf: int) -> list[tuple[int, int]]:
    n = sys.n_spatial
    occupied = [p for p in range(n) if (hf >> p) & 1 and (hf >> (p + n)) & 1]
    empty = [p for p in range(n) if not (hf >> p) & 1 and not (hf >> (p + n)) & 1]
    return [
        (m, e)
        for m in occupied
        for e in empty
        if (sys.irreps[m] * sys.irreps[e]).bits == sigma.bits
    ]


def build_reference(sigma: IrrepLabel, spin: int, sys: MolecularSystem,
                    hf: int | None = None, pair: tuple[int, int] | None = None,
                    allow_single_determinant: bool = False) -> StateSpec:
    """Pick the (m, e) pair realizing Sigma and build the reference spec.

    Among all doubly-occupied m and empty e with irrep(m) x irrep(e) ==
    Sigma, the pair minimizing the diagonal gap h1[e,e] - h1[m,m] is taken
    (a high-lying occupied with a low-lying virtual); `pair` overrides the
    choice.  With `allow_single_determinant` a totally symmetric singlet
    is referenced by the HF determinant itself.
    """
    if spin not in (SINGLET, TRIPLET):
        raise ValueError(f"spin must be 0 (singlet) or 1 (triplet), got {spin}")
    if sigma.group != sys.point_group:
        raise ValueError(f"irrep {sigma} does not belong to group {sys.point_group}")
    if hf is None:
        hf = hf_determinant(sys)

    if allow_single_determinant:
        if spin != SINGLET or not sigma.is_totally_symmetric:
            raise ValueError("single-determinant mode requires a totally "
                             "symmetric singlet target")
        return StateSpec(sigma, spin, None, None, hf, hf,
                         sys.n_spatial, sys.n_electrons)

    candidates = _pair_candidates(sigma, sys, hf)
    if not candidates:
        n = sys.n_spatial
        occupied = [p for p in range(n) if (hf >> p) & 1 and (hf >> (p + n)) & 1]
        empty = [p for p in range(n) if not (hf >> p) & 1 and not (hf >> (p + n)) & 1]
        available = sorted(
            {(sys.irreps[m] * sys.irreps[e]).name for m in occupied for e in empty}
        )
        raise SectorUnreachableError(
            f"no (m, e) pair gives irrep {sigma.name}; reachable products: "
            f"{', '.join(available) or 'none'}"
        )
    if pair is not None:
        if pair not in candidates:
            raise ValueError(f"requested pair {pair} does not realize {sigma.name}")
        m, e = pair
    else:
        m, e = min(candidates, key=lambda me: (sys.h1[me[1], me[1]]
                                               - sys.h1[me[0], me[0]], me))

    n = sys.n_spatial
    phi_a = hf & ~(1 << m) | (1 << e)              # m-up -> e-up
    phi_b = hf & ~(1 << (m + n)) | (1 << (e + n))  # m-down -> e-down
    return StateSpec(sigma, spin, m, e, phi_a, phi_b, n, sys.n_electrons)
