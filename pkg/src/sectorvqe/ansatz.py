"""Totally symmetric, spin-scalar excitation families and the factorized unitary.

Spin scalarity is enforced at the generator level: every variational
parameter multiplies a spin-traced excitation structure, E_ai - E_ia for
singles and E_ai E_bj - E_jb E_ia for doubles (E is the spin-summed
one-body excitation).  Each family expands into at most four spin-orbital
member excitations - the spin-complementary pairs of the determinant
reference plus whatever completion members scalarity requires (same-spin
partners, occupation-weighted strings from chained index coincidences).
All spin-complementary members automatically share the family parameter,
and the summed generator commutes with S^2 exactly, so the evolved state
keeps the spin and irrep labels of the reference at machine precision.

A family is admitted when its generator moves at least one of the two
reference determinants (the determinant-selective filter); structures
whose generator vanishes identically (e.g. the open-shell rotator
E_me E_em - h.c.) drop out on their own.

Families whose members share spin-orbital support do not factorize into
commuting pair rotations; their exponential is evaluated exactly via a
scaled Taylor expansion restricted to the support subspace.  Singles
families and single-member families keep the fast Givens-rotation path.
"""

from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass, field

import numpy as np

from .fermion import (
    FermionOperator,
    build_s_squared,
    ladder_excitation,
    normal_ordered,
    spin_traced_excitation,
)
from .jw import jordan_wigner
from .statevector import Statevector
from .symmetry import StateSpec
from .system import MolecularSystem

__all__ = [
    "ExcitationGenerator",
    "ExcitationGroup",
    "Ansatz",
    "enumerate_pool",
    "tie_parameters",
    "build_ansatz",
    "apply_ansatz",
    "unrestricted_uccsd_parameter_count",
]

# spatial slot structure: tuple of (source, destination) pairs
FamilyKey = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ExcitationGenerator:
    """Anti-hermitian member excitation T - T+ of one spin-free family.

    `cre` and `ann` are flat spin-orbital tuples; an index present in both
    acts as an occupation spectator (chained structures contract into
    number-weighted hops).  Members are oriented so they enter the family
    sum with coefficient +1.
    """

    cre: tuple[int, ...]
    ann: tuple[int, ...]
    n_spatial: int
    acts_on_A: bool
    acts_on_B: bool
    family: FamilyKey = field(default=(), compare=False)

    @property
    def rank(self) -> int:
        return len(self.cre)

    @property
    def sort_key(self) -> tuple[int, ...]:
        return self.ann + self.cre

    def kappa(self) -> FermionOperator:
        t = ladder_excitation(self.cre, self.ann)
        return t - t.adjoint()

    def spin_flipped(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        n = self.n_spatial
        flip = lambda p: p + n if p < n else p - n
        return (
            tuple(sorted(flip(p) for p in self.cre)),
            tuple(sorted(flip(q) for q in self.ann)),
        )

    def support(self) -> frozenset[int]:
        return frozenset(self.cre) | frozenset(self.ann)

    def __repr__(self) -> str:
        n = self.n_spatial
        fmt = lambda p: f"{p % n}{'u' if p < n else 'd'}"
        return (
            "k[" + ",".join(map(fmt, self.ann)) + "->" + ",".join(map(fmt, self.cre)) + "]"
        )


@dataclass(frozen=True)
class ExcitationGroup:
    """Members of one spin-free structure sharing one variational parameter."""

    generators: tuple[ExcitationGenerator, ...]
    class_tag: str
    parameter_id: int = -1

    @property
    def rank(self) -> int:
        return max(g.rank for g in self.generators)

    @property
    def sort_key(self) -> tuple[int, ...]:
        return min(g.sort_key for g in self.generators)

    @property
    def disjoint_support(self) -> bool:
        supports = [g.support() for g in self.generators]
        for i, a in enumerate(supports):
            for b in supports[i + 1:]:
                if a & b:
                    return False
        return True

    def summed_kappa(self) -> FermionOperator:
        total = FermionOperator.zero()
        for g in self.generators:
            total = total + g.kappa()
        return total


@dataclass(frozen=True)
class Ansatz:
    """Lexically ordered groups, one-body first, repeated `reps` times."""

    groups: tuple[ExcitationGroup, ...]
    reps: int
    n_qubits: int

    @property
    def parameter_count(self) -> int:
        return len(self.groups) * self.reps

    def dump(self) -> str:
        lines = []
        for g in self.groups:
            gens = " ".join(repr(x) for x in g.generators)
            lines.append(f"group {g.parameter_id} class {g.class_tag} "
                         f"theta{g.parameter_id}: {gens}")
        return "\n".join(lines)


def _spin_free_structures(sys: MolecularSystem) -> list[FamilyKey]:
    """Totally symmetric spatial slot structures, inverses deduplicated."""
    n = sys.n_spatial
    bits = [label.bits for label in sys.irreps]
    slots = [(i, a) for i in range(n) for a in range(n) if i != a]
    singles = [
        ((i, a),) for i, a in slots if bits[i] == bits[a]
    ]
    doubles = [
        (s1, s2)
        for s1, s2 in itertools.combinations_with_replacement(slots, 2)
        if not (bits[s1[0]] ^ bits[s1[1]] ^ bits[s2[0]] ^ bits[s2[1]])
    ]
    keys: list[FamilyKey] = []
    seen: set[FamilyKey] = set()
    for raw in singles + doubles:
        key = tuple(sorted(raw))
        reverse = tuple(sorted((d, s) for s, d in raw))
        if reverse in seen and reverse != key:
            continue
        if key not in seen:
            seen.add(key)
            keys.append(key)
    return keys


def _family_members(key: FamilyKey, n: int) -> tuple[
        list[tuple[tuple[int, ...], tuple[int, ...]]], FermionOperator]:
    """Oriented (cre, ann) members of E-product structure `key` and its kappa."""
    op = spin_traced_excitation(key[0][1], key[0][0], n)
    for source, dest in key[1:]:
        op = op * spin_traced_excitation(dest, source, n)
    kappa = normal_ordered(op - op.adjoint())
    if len(kappa) == 0:
        return [], kappa
    members = []
    weights = set()
    for string, coeff in normal_ordered(op).terms:
        cre = tuple(sorted(idx for idx, create in string if create))
        ann = tuple(sorted(idx for idx, create in string if not create))
        if cre == ann:
            continue  # pure occupation term, cancels inside kappa
        ((canon, sign),) = ladder_excitation(cre, ann).terms
        assert canon == string
        weight = coeff / sign
        weights.add(abs(weight))
        members.append((cre, ann) if weight.real > 0 else (ann, cre))
    if len(weights) > 1:
        raise RuntimeError(f"family {key} has non-uniform member weights")
    # self-check: the oriented members reproduce kappa up to the common scale
    scale = weights.pop()
    rebuilt = FermionOperator.zero()
    for cre, ann in members:
        t = ladder_excitation(cre, ann)
        rebuilt = rebuilt + (scale * t - scale * t.adjoint())
    if rebuilt != kappa:
        raise RuntimeError(f"member decomposition of family {key} is inconsistent")
    return members, kappa


def _moves(cre: tuple[int, ...], ann: tuple[int, ...], occ: int) -> bool:
    """True when the excitation maps the determinant to a nonzero image."""
    spectators = set(cre) & set(ann)
    needed = set(ann)
    created = set(cre) - spectators
    return all((occ >> q) & 1 for q in needed) and not any(
        (occ >> p) & 1 for p in created
    )


def enumerate_pool(spec: StateSpec, sys: MolecularSystem) -> list[ExcitationGenerator]:
    """Members of every spin-free family that moves phi_A or phi_B.

    Families are S_z-conserving and totally symmetric by construction;
    a family enters the pool when its anti-hermitian generator has a
    nonzero action on at least one reference determinant (in either the
    excitation or de-excitation direction).  All members of an admitted
    family are kept - including completion members that act on neither
    reference - because the family sum is what commutes with S^2.
    """
    n = spec.n_spatial
    occ_a, occ_b = spec.phi_A, spec.phi_B
    pool: list[ExcitationGenerator] = []
    for key in _spin_free_structures(sys):
        members, kappa = _family_members(key, n)
        if not members:
            continue
        flags = []
        family_acts = False
        for cre, ann in members:
            acts_a = _moves(cre, ann, occ_a) or _moves(ann, cre, occ_a)
            acts_b = _moves(cre, ann, occ_b) or _moves(ann, cre, occ_b)
            flags.append((acts_a, acts_b))
            family_acts = family_acts or acts_a or acts_b
        if not family_acts:
            continue
        for (cre, ann), (acts_a, acts_b) in zip(members, flags):
            pool.append(
                ExcitationGenerator(cre, ann, n, acts_a, acts_b, family=key)
            )
    return pool


def tie_parameters(pool: list[ExcitationGenerator],
                   spec: StateSpec) -> list[ExcitationGroup]:
    """Collect family members into shared-parameter groups and audit them.

    Checks per group: closure under the spin-complementarity map (the
    global spin flip of every member is itself a member), and exact
    commutation of the summed generator with S^2 via the Jordan-Wigner
    images.  Either failure raises - silently accepting a non-scalar
    group would let the optimizer leave the spin sector.
    """
    by_family: dict[FamilyKey, list[ExcitationGenerator]] = {}
    for gen in pool:
        by_family.setdefault(gen.family, []).append(gen)

    n_qubits = 2 * spec.n_spatial
    s_squared = jordan_wigner(build_s_squared(spec.n_spatial), n_qubits)
    groups = []
    for key in sorted(by_family):
        members = sorted(by_family[key], key=lambda g: g.sort_key)
        keys = {(g.cre, g.ann) for g in members}
        for g in members:
            flipped = g.spin_flipped()
            if flipped not in keys and (flipped[1], flipped[0]) not in keys:
                raise RuntimeError(
                    f"family {key} is not closed under spin complementarity: "
                    f"{g!r} has no partner"
                )
        group = ExcitationGroup(tuple(members), _class_tag(members))
        image = jordan_wigner(group.summed_kappa(), n_qubits)
        commutator = image * s_squared - s_squared * image
        if len(commutator):
            worst = max(abs(c) for _, c in commutator.terms)
            if worst > 1e-12:
                raise RuntimeError(
                    f"family {key} generator does not commute with S^2 "
                    f"(residual {worst:.2e})"
                )
        groups.append(group)
    return groups


def _class_tag(members: list[ExcitationGenerator]) -> str:
    rank = max(g.rank for g in members)
    if rank == 1:
        both = all(g.acts_on_A and g.acts_on_B for g in members)
        return "1b-caseI" if both else "1b-caseII"
    if len(members) == 1:
        return "2b-paired"
    acting = [g for g in members if g.acts_on_A or g.acts_on_B]
    both = all(g.acts_on_A and g.acts_on_B for g in acting)
    return "2b-caseI" if both else "2b-caseII"


def build_ansatz(groups: list[ExcitationGroup], reps: int = 2,
                 n_qubits: int | None = None) -> Ansatz:
    """Order groups lexically (one-body first) and fix the repetition count."""
    if not groups:
        raise ValueError("empty group list")
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    if n_qubits is None:
        n_qubits = 2 * groups[0].generators[0].n_spatial
    ordered = sorted(groups, key=lambda g: (g.rank, g.sort_key))
    numbered = tuple(
        dataclasses.replace(g, parameter_id=k) for k, g in enumerate(ordered)
    )
    return Ansatz(numbered, reps, n_qubits)


class _CompiledGenerator:
    """Occupancy-selected amplitude pairs of one member excitation.

    A member string T pairs every determinant with its annihilators (and
    spectators) occupied and its created orbitals empty against the image
    determinant; T^2 = 0, so exp(theta (T - T+)) is a Givens rotation on
    those pairs.  Signs follow the sequential-ladder convention shared
    with the rest of the package.
    """

    def __init__(self, gen: ExcitationGenerator, n_qubits: int):
        idx = _register_indices(n_qubits)
        spectators = set(gen.cre) & set(gen.ann)
        ann_mask = np.uint32(sum(1 << q for q in gen.ann))
        created = np.uint32(sum(1 << p for p in gen.cre if p not in spectators))
        sel = idx[((idx & ann_mask) == ann_mask) & ((idx & created) == 0)]
        cur = sel.copy()
        sign = np.ones(len(sel), dtype=np.float64)
        for q in gen.ann:
            below = np.uint32((1 << q) - 1)
            sign *= 1.0 - 2.0 * (np.bitwise_count(cur & below) & 1)
            cur = cur ^ np.uint32(1 << q)
        for p in reversed(gen.cre):
            below = np.uint32((1 << p) - 1)
            sign *= 1.0 - 2.0 * (np.bitwise_count(cur & below) & 1)
            cur = cur ^ np.uint32(1 << p)
        self.sel = sel
        self.partner = cur
        self.sign = sign

    def rotate(self, theta: float, amps: np.ndarray) -> None:
        c, s = np.cos(theta), np.sin(theta)
        a = amps[self.sel]
        b = amps[self.partner]
        amps[self.sel] = c * a - s * self.sign * b
        amps[self.partner] = c * b + s * self.sign * a

    def add_kappa(self, amps: np.ndarray, out: np.ndarray) -> None:
        """out += (T - T+) amps; sel and partner index sets are disjoint."""
        out[self.partner] += self.sign * amps[self.sel]
        out[self.sel] -= self.sign * amps[self.partner]


class _CompiledGroup:
    """Pair rotations plus the summed-generator action for one group.

    Overlapping members are exponentiated exactly by a scaled Taylor
    expansion restricted to the group's support subspace.
    """

    def __init__(self, group: ExcitationGroup, n_qubits: int):
        self.group = group
        self.n_qubits = n_qubits
        self.generators = [
            _CompiledGenerator(g, n_qubits) for g in group.generators
        ]
        self.fast = group.disjoint_support
        self.norm_bound = float(len(self.generators))
        if not self.fast:
            support = np.unique(np.concatenate(
                [np.concatenate([g.sel, g.partner]) for g in self.generators]
            ))
            self._support = support
            self._sub = []
            for g in self.generators:
                self._sub.append((
                    np.searchsorted(support, g.sel),
                    np.searchsorted(support, g.partner),
                    g.sign,
                ))

    def kappa_apply(self, amps: np.ndarray) -> np.ndarray:
        out = np.zeros_like(amps)
        for gen in self.generators:
            gen.add_kappa(amps, out)
        return out

    def _kappa_sub(self, vec: np.ndarray) -> np.ndarray:
        out = np.zeros_like(vec)
        for sel, partner, sign in self._sub:
            out[partner] += sign * vec[sel]
            out[sel] -= sign * vec[partner]
        return out

    def apply(self, theta: float, amps: np.ndarray) -> np.ndarray:
        if theta == 0.0:
            return amps
        if self.fast:
            for gen in self.generators:
                gen.rotate(theta, amps)
            return amps
        sub = amps[self._support]
        segments = max(1, int(np.ceil(abs(theta) * self.norm_bound)))
        step = theta / segments
        for _ in range(segments):
            acc = sub.copy()
            term = sub
            for k in range(1, 60):
                term = (step / k) * self._kappa_sub(term)
                acc += term
                if np.linalg.norm(term) < 1e-16:
                    break
            sub = acc
        amps[self._support] = sub
        return amps


def _register_indices(n_qubits: int) -> np.ndarray:
    from .statevector import _indices

    return _indices(n_qubits)


_COMPILED_CACHE: dict[Ansatz, list[_CompiledGroup]] = {}


def _compiled_groups(ansatz: Ansatz) -> list[_CompiledGroup]:
    cached = _COMPILED_CACHE.get(ansatz)
    if cached is None:
        cached = [_CompiledGroup(g, ansatz.n_qubits) for g in ansatz.groups]
        if len(_COMPILED_CACHE) > 8:
            _COMPILED_CACHE.clear()
        _COMPILED_CACHE[ansatz] = cached
    return cached


def apply_ansatz(ansatz: Ansatz, theta: np.ndarray, psi0: Statevector) -> Statevector:
    """Apply the factorized unitary with parameter vector `theta` to psi0."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (ansatz.parameter_count,):
        raise ValueError(
            f"expected {ansatz.parameter_count} parameters, got {theta.shape}"
        )
    compiled = _compiled_groups(ansatz)
    amps = psi0.amps.copy()
    k = len(ansatz.groups)
    for rep in range(ansatz.reps):
        for gi, cg in enumerate(compiled):
            amps = cg.apply(float(theta[rep * k + gi]), amps)
    return Statevector(amps, ansatz.n_qubits)


def unrestricted_uccsd_parameter_count(sys: MolecularSystem) -> int:
    """Parameter count of plain spin-orbital UCCSD from the HF determinant.

    Same-spin singles occupied -> virtual plus all S_z-conserving doubles,
    with no spatial-symmetry filter and no spin tying; the yardstick for
    the tied ansatz's parameter economy.
    """
    n = sys.n_spatial
    n_occ = sys.n_occupied
    occ = list(range(n_occ)) + [p + n for p in range(n_occ)]
    virt = [p for p in range(2 * n) if p not in occ]
    spin = lambda p: p // n
    singles = sum(1 for i in occ for a in virt if spin(i) == spin(a))
    doubles = 0
    for xi, i in enumerate(occ):
        for j in occ[xi + 1:]:
            for ai, a in enumerate(virt):
                for b in virt[ai + 1:]:
                    if spin(i) + spin(j) == spin(a) + spin(b):
                        doubles += 1
    return singles + doubles
