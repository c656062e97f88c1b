"""Non-parametrized gate sequences preparing (|phi_A> +/- |phi_B>)/sqrt(2).

Starting from the HF bitstring, the singlet circuit moves the m-up
electron to e-up (two X gates), splits the e-down qubit with a Hadamard,
and copies the branch difference onto m-down/e-up/m-up with three CNOTs.
The triplet circuit prepends one X on e-down so the Hadamard branch picks
up the antisymmetric sign.
"""

from __future__ import annotations

from dataclasses import dataclass

from .statevector import Statevector, apply_gate
from .symmetry import StateSpec, TRIPLET

__all__ = ["GateSequence", "compile_reference_circuit", "prepare_reference"]


@dataclass(frozen=True)
class GateSequence:
    """Ordered list of (gate name, qubit indices)."""

    ops: tuple[tuple[str, tuple[int, ...]], ...]

    def to_netlist(self) -> str:
        return "\n".join(
            f"{gate} " + " ".join(f"q{q}" for q in qubits) for gate, qubits in self.ops
        )

    def apply(self, psi: Statevector) -> Statevector:
        for gate, qubits in self.ops:
            psi = apply_gate(psi, gate, qubits)
        return psi

    def inverse(self) -> GateSequence:
        return GateSequence(tuple(reversed(self.ops)))  # X, H, CX are involutions

    def __len__(self) -> int:
        return len(self.ops)


def compile_reference_circuit(spec: StateSpec) -> GateSequence:
    """Gate sequence taking the HF bitstring to the two-determinant reference."""
    if spec.single_determinant:
        raise ValueError("single-determinant reference needs no preparation circuit")
    m, e, n = spec.m, spec.e, spec.n_spatial
    if m == e:
        raise ValueError("reference preparation requires m != e")
    ops: list[tuple[str, tuple[int, ...]]] = []
    if spec.spin == TRIPLET:
        ops.append(("X", (e + n,)))
    ops.extend(
        [
            ("X", (e,)),
            ("X", (m,)),
            ("H", (e + n,)),
            ("CX", (e + n, m + n)),
            ("CX", (e + n, e)),
            ("CX", (e + n, m)),
        ]
    )
    return GateSequence(tuple(ops))


def prepare_reference(spec: StateSpec, hf: int | None = None) -> Statevector:
    """Execute the preparation circuit on the HF bitstring.

    The HF determinant is reconstructed from the spec unless an explicit
    bitmask is given.
    """
    if hf is None:
        filled = (1 << (spec.n_electrons // 2)) - 1
        hf = filled | (filled << spec.n_spatial)
    psi = Statevector.basis_state(hf, spec.n_qubits)
    if spec.single_determinant:
        return psi
    return compile_reference_circuit(spec).apply(psi)
