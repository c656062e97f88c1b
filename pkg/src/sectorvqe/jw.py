"""Jordan-Wigner encoding of fermionic operators into Pauli sums.

A PauliString is stored symplectically as a pair of bit masks (x, z): the
operator is the hermitian tensor sigma(x, z) = i^{|x & z|} X^x Z^z, which
is I/X/Y/Z per qubit for the bit pairs 00/10/11/01.  Qubit order equals
the flat spin-orbital order, so circuit qubit indices match ladder
indices directly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fermion import FermionOperator

__all__ = ["PauliString", "PauliSum", "jordan_wigner"]

PRUNE_TOL = 1e-14

_LETTERS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis over a fixed register."""

    x: int
    z: int
    n_qubits: int

    def __post_init__(self) -> None:
        limit = 1 << self.n_qubits
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError("Pauli mask exceeds register size")

    @classmethod
    def from_label(cls, label: str) -> PauliString:
        """Build from a left-to-right qubit string, e.g. 'XIZY' (qubit 0 last)."""
        x = z = 0
        for qubit, letter in enumerate(reversed(label)):
            if letter in "XY":
                x |= 1 << qubit
            if letter in "ZY":
                z |= 1 << qubit
        return cls(x, z, len(label))

    def letter(self, qubit: int) -> str:
        return _LETTERS[((self.x >> qubit) & 1, (self.z >> qubit) & 1)]

    @property
    def label(self) -> str:
        return "".join(self.letter(q) for q in reversed(range(self.n_qubits)))

    @property
    def weight(self) -> int:
        return ((self.x | self.z)).bit_count()

    def commutes_with(self, other: PauliString) -> bool:
        """True when the strings commute (they anticommute otherwise)."""
        return ((self.x & other.z).bit_count() + (self.z & other.x).bit_count()) % 2 == 0

    def __mul__(self, other: PauliString) -> tuple[complex, PauliString]:
        """Product as (phase, string); the phase is a power of i."""
        if self.n_qubits != other.n_qubits:
            raise ValueError("register size mismatch")
        x, z = self.x ^ other.x, self.z ^ other.z
        k = (
            (self.x & self.z).bit_count()
            + (other.x & other.z).bit_count()
            - (x & z).bit_count()
            + 2 * (self.z & other.x).bit_count()
        )
        return 1j ** (k % 4), PauliString(x, z, self.n_qubits)

    def __repr__(self) -> str:
        return f"PauliString({self.label})"


@dataclass(frozen=True)
class PauliSum:
    """Deduplicated complex-weighted sum of PauliStrings."""

    terms: tuple[tuple[PauliString, complex], ...]
    n_qubits: int

    @classmethod
    def from_dict(cls, data: dict[tuple[int, int], complex], n_qubits: int) -> PauliSum:
        kept = tuple(
            (PauliString(x, z, n_qubits), c)
            for (x, z), c in sorted(data.items())
            if abs(c) > PRUNE_TOL
        )
        return cls(kept, n_qubits)

    @classmethod
    def zero(cls, n_qubits: int) -> PauliSum:
        return cls((), n_qubits)

    def _as_dict(self) -> dict[tuple[int, int], complex]:
        return {(p.x, p.z): c for p, c in self.terms}

    def __add__(self, other: PauliSum) -> PauliSum:
        if self.n_qubits != other.n_qubits:
            raise ValueError("register size mismatch")
        data = self._as_dict()
        for p, c in other.terms:
            key = (p.x, p.z)
            data[key] = data.get(key, 0.0) + c
        return PauliSum.from_dict(data, self.n_qubits)

    def __sub__(self, other: PauliSum) -> PauliSum:
        return self + (-1.0) * other

    def __rmul__(self, scalar: complex) -> PauliSum:
        return PauliSum.from_dict(
            {(p.x, p.z): scalar * c for p, c in self.terms}, self.n_qubits
        )

    def __mul__(self, other: PauliSum) -> PauliSum:
        if self.n_qubits != other.n_qubits:
            raise ValueError("register size mismatch")
        data: dict[tuple[int, int], complex] = {}
        for p1, c1 in self.terms:
            for p2, c2 in other.terms:
                phase, p = p1 * p2
                key = (p.x, p.z)
                data[key] = data.get(key, 0.0) + phase * c1 * c2
        return PauliSum.from_dict(data, self.n_qubits)

    def adjoint(self) -> PauliSum:
        return PauliSum.from_dict(
            {(p.x, p.z): c.conjugate() for p, c in self.terms}, self.n_qubits
        )

    @property
    def is_hermitian(self) -> bool:
        return all(abs(c.imag) < 1e-12 for _, c in self.terms)

    def __len__(self) -> int:
        return len(self.terms)


def _ladder_paulisum(index: int, create: bool, n_qubits: int) -> PauliSum:
    """JW image of a single ladder operator.

    a+_p -> (X_p - iY_p)/2 . Z_{p-1}...Z_0 and a_p -> (X_p + iY_p)/2 . Z...
    """
    parity = (1 << index) - 1
    x = 1 << index
    sign = -1j if create else 1j
    return PauliSum.from_dict(
        {
            (x, parity): 0.5,
            (x, parity | x): 0.5 * sign,
        },
        n_qubits,
    )


def jordan_wigner(op: FermionOperator, n_qubits: int | None = None) -> PauliSum:
    """Jordan-Wigner encode a FermionOperator into a PauliSum.

    The register size defaults to the smallest that fits the operator.
    """
    if n_qubits is None:
        n_qubits = op.max_index + 1
    if op.max_index >= n_qubits:
        raise ValueError(
            f"operator touches index {op.max_index}, register has {n_qubits} qubits"
        )
    total: dict[tuple[int, int], complex] = {}
    for string, coeff in op.terms:
        acc = PauliSum.from_dict({(0, 0): coeff}, n_qubits)
        for index, create in string:
            acc = acc * _ladder_paulisum(index, create, n_qubits)
        for p, c in acc.terms:
            key = (p.x, p.z)
            total[key] = total.get(key, 0.0) + c
    return PauliSum.from_dict(total, n_qubits)
