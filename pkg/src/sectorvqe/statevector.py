"""Dense complex statevector over the spin-orbital qubit register.

Basis index bit q holds the occupation of qubit q, so a determinant
bitmask is directly a basis index.  Gate application and Pauli-exponential
rotations are exact; a compiled form of a PauliSum caches the permutation
and sign structure of every term for fast repeated expectation/apply.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse

from .jw import PauliString, PauliSum

__all__ = [
    "Statevector",
    "CompiledPauliSum",
    "apply_gate",
    "apply_pauli_rotation",
    "expectation",
    "overlap",
]

_INDEX_CACHE: dict[int, np.ndarray] = {}


def _indices(n_qubits: int) -> np.ndarray:
    idx = _INDEX_CACHE.get(n_qubits)
    if idx is None:
        idx = np.arange(1 << n_qubits, dtype=np.uint32)
        _INDEX_CACHE[n_qubits] = idx
    return idx


def _signs(masked: np.ndarray) -> np.ndarray:
    """(-1)^parity for each popcount in `masked`."""
    return 1.0 - 2.0 * (np.bitwise_count(masked) & 1)


@dataclass
class Statevector:
    """Normalized amplitude vector over 2^n_qubits basis states."""

    amps: np.ndarray
    n_qubits: int

    @classmethod
    def basis_state(cls, index: int, n_qubits: int) -> Statevector:
        amps = np.zeros(1 << n_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps, n_qubits)

    def copy(self) -> Statevector:
        return Statevector(self.amps.copy(), self.n_qubits)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def probability_weight(self, mask: np.ndarray) -> float:
        """Total amplitude weight on the basis states selected by `mask`."""
        return float(np.sum(np.abs(self.amps[mask]) ** 2))


def apply_gate(psi: Statevector, gate: str, qubits: tuple[int, ...]) -> Statevector:
    """Apply X, H, or CX on the given qubits; returns a fresh statevector."""
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"duplicate qubit indices {qubits}")
    if any(not 0 <= q < psi.n_qubits for q in qubits):
        raise ValueError(f"qubit indices {qubits} out of range")
    idx = _indices(psi.n_qubits)
    if gate == "X":
        (q,) = qubits
        return Statevector(psi.amps[idx ^ (1 << q)], psi.n_qubits)
    if gate == "H":
        (q,) = qubits
        bit = 1 << q
        lo = (idx & bit) == 0
        out = np.empty_like(psi.amps)
        a0, a1 = psi.amps[lo], psi.amps[~lo]
        inv = 1.0 / np.sqrt(2.0)
        out[lo] = (a0 + a1) * inv
        out[~lo] = (a0 - a1) * inv
        return Statevector(out, psi.n_qubits)
    if gate == "CX":
        control, target = qubits
        hot = (idx & (1 << control)) != 0
        out = psi.amps.copy()
        out[hot] = psi.amps[idx[hot] ^ (1 << target)]
        return Statevector(out, psi.n_qubits)
    raise ValueError(f"unsupported gate {gate!r}")


def _pauli_apply(amps: np.ndarray, x: int, z: int, n_qubits: int) -> np.ndarray:
    """sigma(x, z) |psi> for the hermitian Pauli tensor."""
    idx = _indices(n_qubits)
    src = idx ^ np.uint32(x)
    out = amps[src] * _signs(src & np.uint32(z))
    k = (x & z).bit_count() % 4
    if k:
        out = out * (1j ** k)
    return out


def apply_pauli_rotation(psi: Statevector, pauli: PauliString, theta: float) -> Statevector:
    """exp(i theta P) |psi> = cos(theta) |psi> + i sin(theta) P |psi>."""
    if pauli.n_qubits != psi.n_qubits:
        raise ValueError("register size mismatch")
    if theta == 0.0:
        return psi.copy()
    rotated = (
        np.cos(theta) * psi.amps
        + 1j * np.sin(theta) * _pauli_apply(psi.amps, pauli.x, pauli.z, psi.n_qubits)
    )
    return Statevector(rotated, psi.n_qubits)


def expectation(psi: Statevector, observable: PauliSum | CompiledPauliSum) -> float:
    """<psi|O|psi> for hermitian O; raises if the imaginary residue exceeds 1e-10."""
    if isinstance(observable, PauliSum):
        observable = CompiledPauliSum(observable)
    value = observable.expectation(psi.amps)
    if abs(value.imag) > 1e-10:
        raise ValueError(f"non-hermitian observable: imaginary residue {value.imag:g}")
    return float(value.real)


def overlap(psi: Statevector, chi: Statevector) -> complex:
    """<chi|psi>."""
    if psi.n_qubits != chi.n_qubits:
        raise ValueError("register size mismatch")
    return complex(np.vdot(chi.amps, psi.amps))


class CompiledPauliSum:
    """PauliSum with terms grouped by their X-mask for fast repeated use.

    Every term sigma(x, z) maps amplitude i to a signed copy of amplitude
    i ^ x, so all terms sharing an x collapse into one coefficient vector:
    (O psi)[i] = sum_x coeff_x[i] * psi[i ^ x].
    """

    def __init__(self, paulisum: PauliSum):
        self.n_qubits = paulisum.n_qubits
        idx = _indices(self.n_qubits)
        grouped: dict[int, np.ndarray] = {}
        for p, coeff in paulisum.terms:
            vec = grouped.get(p.x)
            if vec is None:
                vec = grouped.setdefault(
                    p.x, np.zeros(1 << self.n_qubits, dtype=np.complex128)
                )
            src = idx ^ np.uint32(p.x)
            signs = _signs(src & np.uint32(p.z))
            vec += (complex(coeff) * (1j ** ((p.x & p.z).bit_count() % 4))) * signs
        self._groups = [
            (np.uint32(x), idx ^ np.uint32(x), vec) for x, vec in sorted(grouped.items())
        ]
        self._n_terms = len(paulisum.terms)

    def expectation(self, amps: np.ndarray) -> complex:
        conj = np.conj(amps)
        total = 0.0 + 0.0j
        for _, src, vec in self._groups:
            total += np.dot(conj, vec * amps[src])
        return total

    def apply(self, amps: np.ndarray) -> np.ndarray:
        out = np.zeros_like(amps)
        for _, src, vec in self._groups:
            out += vec * amps[src]
        return out

    def to_csr(self) -> scipy.sparse.csr_matrix:
        dim = 1 << self.n_qubits
        if not self._groups:
            return scipy.sparse.csr_matrix((dim, dim), dtype=np.complex128)
        idx = _indices(self.n_qubits)
        rows, cols, data = [], [], []
        for _, src, vec in self._groups:
            rows.append(idx)
            cols.append(src)
            data.append(vec)
        mat = scipy.sparse.coo_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
            shape=(dim, dim),
        )
        return mat.tocsr()

    def to_dense(self) -> np.ndarray:
        return self.to_csr().toarray()

    def __len__(self) -> int:
        return self._n_terms
