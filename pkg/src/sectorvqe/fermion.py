"""Second-quantized operators over spin-orbitals and the physical observables.

Spin-orbitals are indexed flat: up spins occupy qubits [0, n_spatial),
down spins [n_spatial, 2*n_spatial).  A FermionOperator is a weighted sum
of ladder strings; strings already in excitation form (all creators before
all annihilators) are canonicalized by sorting each block with the
transposition parity tracked, so equal operators merge term-by-term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .system import MolecularSystem

__all__ = [
    "FermionOperator",
    "up",
    "down",
    "spin_of",
    "spatial_of",
    "ladder_excitation",
    "spin_traced_excitation",
    "normal_ordered",
    "build_hamiltonian",
    "build_s_squared",
    "build_sz",
    "build_number",
    "build_dipole_z",
]

# One ladder factor: (flat spin-orbital index, True for creation).
LadderString = tuple[tuple[int, bool], ...]

COEFF_TOL = 1e-14


def up(p: int, n_spatial: int) -> int:
    return p


def down(p: int, n_spatial: int) -> int:
    return p + n_spatial


def spin_of(flat: int, n_spatial: int) -> int:
    """0 for up, 1 for down."""
    return flat // n_spatial


def spatial_of(flat: int, n_spatial: int) -> int:
    return flat % n_spatial


def _sort_with_parity(indices: Iterable[int]) -> tuple[tuple[int, ...], int]:
    """Sort ascending; return (sorted tuple, parity sign of the permutation)."""
    seq = list(indices)
    sign = 1
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
    return tuple(seq), sign


def _canonicalize(string: LadderString, coeff: complex) -> tuple[LadderString, complex]:
    """Canonical form for excitation-shaped strings (creators first).

    Strings not in creators-then-annihilators shape are left untouched;
    they still merge when literally equal.
    """
    kinds = [create for _, create in string]
    split = sum(kinds)
    if kinds != [True] * split + [False] * (len(kinds) - split):
        return string, coeff
    cre = [idx for idx, create in string if create]
    ann = [idx for idx, create in string if not create]
    if len(set(cre)) != len(cre) or len(set(ann)) != len(ann):
        return string, 0.0
    cre_sorted, s1 = _sort_with_parity(cre)
    ann_sorted, s2 = _sort_with_parity(ann)
    canonical = tuple((i, True) for i in cre_sorted) + tuple(
        (i, False) for i in ann_sorted
    )
    return canonical, coeff * s1 * s2


@dataclass(frozen=True)
class FermionOperator:
    """Immutable weighted sum of ladder strings."""

    terms: tuple[tuple[LadderString, complex], ...]

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[complex, LadderString]]) -> FermionOperator:
        merged: dict[LadderString, complex] = {}
        for coeff, string in terms:
            string, coeff = _canonicalize(string, complex(coeff))
            if coeff == 0.0:
                continue
            merged[string] = merged.get(string, 0.0) + coeff
        kept = tuple(
            (s, c) for s, c in sorted(merged.items()) if abs(c) > COEFF_TOL
        )
        return cls(kept)

    @classmethod
    def identity(cls, coeff: complex = 1.0) -> FermionOperator:
        return cls.from_terms([(coeff, ())])

    @classmethod
    def zero(cls) -> FermionOperator:
        return cls(())

    def __add__(self, other: FermionOperator) -> FermionOperator:
        return FermionOperator.from_terms(
            [(c, s) for s, c in self.terms] + [(c, s) for s, c in other.terms]
        )

    def __sub__(self, other: FermionOperator) -> FermionOperator:
        return self + (-1.0) * other

    def __rmul__(self, scalar: complex) -> FermionOperator:
        return FermionOperator.from_terms([(scalar * c, s) for s, c in self.terms])

    def __mul__(self, other: FermionOperator) -> FermionOperator:
        """Operator product; strings concatenate, no normal ordering."""
        out = []
        for s1, c1 in self.terms:
            for s2, c2 in other.terms:
                out.append((c1 * c2, s1 + s2))
        return FermionOperator.from_terms(out)

    def adjoint(self) -> FermionOperator:
        out = []
        for string, coeff in self.terms:
            flipped = tuple((idx, not create) for idx, create in reversed(string))
            out.append((np.conj(coeff), flipped))
        return FermionOperator.from_terms(out)

    @property
    def max_index(self) -> int:
        return max((idx for s, _ in self.terms for idx, _ in s), default=-1)

    def __len__(self) -> int:
        return len(self.terms)


def ladder_excitation(cre: tuple[int, ...], ann: tuple[int, ...],
                      coeff: complex = 1.0) -> FermionOperator:
    """Excitation string a+_{P1} a+_{P2} a_{Q2} a_{Q1} for sorted index tuples.

    For singles this is a+_{P} a_{Q}; the annihilators are applied in
    descending order so a closed-shell pair excitation carries the
    conventional positive sign.
    """
    string = tuple((p, True) for p in cre) + tuple((q, False) for q in reversed(ann))
    return FermionOperator.from_terms([(coeff, string)])


def spin_traced_excitation(p: int, q: int, n_spatial: int) -> FermionOperator:
    """Spin-free one-body excitation E_pq = sum_s a+_{ps} a_{qs}."""
    return FermionOperator.from_terms([
        (1.0, ((p, True), (q, False))),
        (1.0, ((p + n_spatial, True), (q + n_spatial, False))),
    ])


def normal_ordered(op: FermionOperator) -> FermionOperator:
    """Wick normal order: creators left of annihilators, contractions expanded.

    Bubbles every annihilator right of the creators with the fermionic
    sign, splitting a_p a+_p into 1 - a+_p a_p; the result merges through
    the canonical excitation-form collection.
    """
    pending = [(coeff, list(string)) for string, coeff in op.terms]
    finished: list[tuple[complex, LadderString]] = []
    while pending:
        coeff, string = pending.pop()
        for pos in range(len(string) - 1):
            (i1, c1), (i2, c2) = string[pos], string[pos + 1]
            if not c1 and c2:
                if i1 == i2:
                    # a_p a+_p = 1 - a+_p a_p
                    pending.append(
                        (coeff, string[:pos] + string[pos + 2:])
                    )
                    pending.append(
                        (-coeff, string[:pos] + [(i2, True), (i1, False)]
                         + string[pos + 2:])
                    )
                else:
                    pending.append(
                        (-coeff, string[:pos] + [(i2, True), (i1, False)]
                         + string[pos + 2:])
                    )
                break
        else:
            finished.append((coeff, tuple(string)))
    return FermionOperator.from_terms(finished)


def build_hamiltonian(sys: MolecularSystem) -> FermionOperator:
    """Spin-orbital Hamiltonian from chemists'-notation spatial integrals.

    H = sum_pq,s h_pq a+_{ps} a_{qs}
      + 1/2 sum_pqrs,st (pq|rs) a+_{ps} a+_{rt} a_{st} a_{qs}
      + core_energy.
    """
    n = sys.n_spatial
    terms: list[tuple[complex, LadderString]] = [(sys.core_energy, ())]
    for p in range(n):
        for q in range(n):
            v = sys.h1[p, q]
            if v == 0.0:
                continue
            for spin in (0, 1):
                P, Q = p + spin * n, q + spin * n
                terms.append((v, ((P, True), (Q, False))))
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    v = sys.h2[p, q, r, s]
                    if v == 0.0:
                        continue
                    for s1 in (0, 1):
                        for s2 in (0, 1):
                            P, Q = p + s1 * n, q + s1 * n
                            R, S = r + s2 * n, s + s2 * n
                            if P == R or Q == S:
                                continue
                            terms.append(
                                (0.5 * v,
                                 ((P, True), (R, True), (S, False), (Q, False)))
                            )
    return FermionOperator.from_terms(terms)


def build_number(n_spatial: int) -> FermionOperator:
    terms = [(1.0 + 0j, ((p, True), (p, False))) for p in range(2 * n_spatial)]
    return FermionOperator.from_terms(terms)


def build_sz(n_spatial: int) -> FermionOperator:
    terms: list[tuple[complex, LadderString]] = []
    for p in range(n_spatial):
        terms.append((0.5, ((p, True), (p, False))))
        terms.append((-0.5, ((p + n_spatial, True), (p + n_spatial, False))))
    return FermionOperator.from_terms(terms)


def build_s_squared(n_spatial: int) -> FermionOperator:
    """Total-spin operator S^2 = S-S+ + Sz(Sz + 1)."""
    s_plus = FermionOperator.from_terms(
        [(1.0 + 0j, ((p, True), (p + n_spatial, False))) for p in range(n_spatial)]
    )
    sz = build_sz(n_spatial)
    return s_plus.adjoint() * s_plus + sz * sz + sz


def build_dipole_z(sys: MolecularSystem) -> FermionOperator:
    """Electronic z-dipole operator -sum_pq d_pq a+_p a_q over both spins."""
    if sys.dipole_z is None:
        raise ValueError("system carries no dipole integrals")
    n = sys.n_spatial
    terms: list[tuple[complex, LadderString]] = []
    for p in range(n):
        for q in range(n):
            v = sys.dipole_z[p, q]
            if v == 0.0:
                continue
            for spin in (0, 1):
                terms.append((-v, ((p + spin * n, True), (q + spin * n, False))))
    return FermionOperator.from_terms(terms)
