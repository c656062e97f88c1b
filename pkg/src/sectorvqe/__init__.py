"""State-specific VQE for symmetry-resolved molecular eigenstates."""

from .ansatz import (
    Ansatz,
    ExcitationGenerator,
    ExcitationGroup,
    apply_ansatz,
    build_ansatz,
    enumerate_pool,
    tie_parameters,
)
from .fermion import (
    FermionOperator,
    build_dipole_z,
    build_hamiltonian,
    build_number,
    build_s_squared,
    build_sz,
)
from .fci import FciRoot, sector_minimum, solve
from .jw import PauliString, PauliSum, jordan_wigner
from .refcircuit import GateSequence, compile_reference_circuit, prepare_reference
from .statevector import (
    Statevector,
    apply_gate,
    apply_pauli_rotation,
    expectation,
    overlap,
)
from .symmetry import StateSpec, build_reference, determinant_irrep, hf_determinant
from .system import (
    IrrepLabel,
    MolecularSystem,
    hartree_fock_energy,
    irrep_product,
    parse_system,
    serialize_system,
)
from .vqe import VqeResult, minimize

__version__ = "0.1.0"
