"""STO-3G basis data and contracted-shell expansion.

Exponents are the standard published STO-3G values (scaled Slater fits);
contraction coefficients are the universal 1s and 2sp fit coefficients.
Only the elements needed for the benchmark molecules are tabulated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# (exponents, coefficients) per shell type; exponents scale with zeta^2
_S1_BASE = (2.227660584, 0.405771156, 0.109818)
_S1_COEF = (0.154328967, 0.535328142, 0.444634542)
_SP2_BASE = (0.994203, 0.231031, 0.0751386)
_S2_COEF = (-0.099967229, 0.399512826, 0.700115469)
_P2_COEF = (0.155916275, 0.607683719, 0.391957393)

# zeta exponents per element: (zeta_1s, zeta_2sp or None)
_ZETA = {
    "H": (1.24, None),
    "He": (1.6875, None),
    "Be": (3.68, 1.15),
    "O": (7.66, 2.25),
}

CHARGE = {"H": 1, "He": 2, "Be": 4, "O": 8}


@dataclass(frozen=True)
class Primitive:
    exponent: float
    coefficient: float  # includes the angular normalization


@dataclass(frozen=True)
class BasisFunction:
    """One contracted Cartesian Gaussian x^l y^m z^n exp(-a r^2)."""

    center: tuple[float, float, float]
    powers: tuple[int, int, int]
    primitives: tuple[Primitive, ...]
    atom_index: int


def _norm_s(alpha: float) -> float:
    return (2.0 * alpha / math.pi) ** 0.75


def _norm_p(alpha: float) -> float:
    return (2.0 * alpha / math.pi) ** 0.75 * 2.0 * math.sqrt(alpha)


def shells_for(element: str) -> list[tuple[str, tuple[float, ...], tuple[float, ...]]]:
    zeta1, zeta2 = _ZETA[element]
    shells = [
        ("s", tuple(b * zeta1**2 for b in _S1_BASE), _S1_COEF),
    ]
    if zeta2 is not None:
        exps = tuple(b * zeta2**2 for b in _SP2_BASE)
        shells.append(("s", exps, _S2_COEF))
        shells.append(("p", exps, _P2_COEF))
    return shells


def build_basis(atoms: list[tuple[str, tuple[float, float, float]]]) -> list[BasisFunction]:
    """Contracted basis for a geometry given in bohr."""
    basis: list[BasisFunction] = []
    for atom_index, (element, center) in enumerate(atoms):
        for kind, exps, coefs in shells_for(element):
            if kind == "s":
                prims = tuple(
                    Primitive(a, c * _norm_s(a)) for a, c in zip(exps, coefs)
                )
                basis.append(BasisFunction(center, (0, 0, 0), prims, atom_index))
            else:
                for powers in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
                    prims = tuple(
                        Primitive(a, c * _norm_p(a)) for a, c in zip(exps, coefs)
                    )
                    basis.append(BasisFunction(center, powers, prims, atom_index))
    return basis


def nuclear_repulsion(atoms: list[tuple[str, tuple[float, float, float]]]) -> float:
    e = 0.0
    for i, (el_i, ri) in enumerate(atoms):
        for el_j, rj in atoms[i + 1:]:
            e += CHARGE[el_i] * CHARGE[el_j] / float(np.linalg.norm(np.subtract(ri, rj)))
    return e


def nuclear_dipole_z(atoms: list[tuple[str, tuple[float, float, float]]]) -> float:
    return sum(CHARGE[el] * r[2] for el, r in atoms)
