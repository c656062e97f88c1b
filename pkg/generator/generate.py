#!/usr/bin/env python3
"""Produce integral dump files for the benchmark scans.

  generate.py --molecule h2o  --point <r_OH in Angstrom> --out <path>
  generate.py --molecule beh2 --point <A..I>             --out <path>

H2O: both O-H bonds at the given length, H-O-H angle fixed at 104.4776
degrees, O at the origin, molecule in the yz plane (C2 axis = z), core
1s(O) frozen -> 8 electrons in 6 active orbitals.

BeH2: Be at the origin, H atoms at the tabulated insertion-path points
(bohr), core 1s(Be) frozen -> 4 electrons in 6 active orbitals.
"""

from __future__ import annotations

import argparse
import math
import sys

import scipy.constants

from dumpio import emit_system
from labeling import label_orbitals
from scf import run_rhf

BOHR_PER_ANGSTROM = 1.0 / (scipy.constants.physical_constants["Bohr radius"][0] * 1e10)

H2O_ANGLE_DEG = 104.4776

# Perpendicular insertion path, H coordinates (0, +/-Y, Z) in bohr.
BEH2_POINTS = {
    "A": ("1.62", "2.00"),
    "B": ("1.505", "2.25"),
    "C": ("1.39", "2.50"),
    "D": ("1.275", "2.75"),
    "E": ("1.16", "3.00"),
    "F": ("1.045", "3.25"),
    "G": ("0.93", "3.50"),
    "H": ("0.815", "3.75"),
    "I": ("0.70", "4.00"),
}


def h2o_geometry(r_angstrom: float):
    r = r_angstrom * BOHR_PER_ANGSTROM
    half = math.radians(H2O_ANGLE_DEG / 2.0)
    y = r * math.sin(half)
    z = r * math.cos(half)
    atoms = [
        ("O", (0.0, 0.0, 0.0)),
        ("H", (0.0, y, z)),
        ("H", (0.0, -y, z)),
    ]
    comments = [
        f"molecule h2o r_OH={r_angstrom:g} A angle={H2O_ANGLE_DEG} deg",
        f"geometry O 0.0 0.0 0.0 bohr",
        f"geometry H 0.0 {y!r} {z!r} bohr",
        f"geometry H 0.0 {-y!r} {z!r} bohr",
    ]
    return atoms, 10, comments


def beh2_geometry(point: str):
    try:
        ys, zs = BEH2_POINTS[point.upper()]
    except KeyError:
        raise SystemExit(f"unknown insertion point {point!r}; use A..I")
    y, z = float(ys), float(zs)
    atoms = [
        ("Be", (0.0, 0.0, 0.0)),
        ("H", (0.0, y, z)),
        ("H", (0.0, -y, z)),
    ]
    comments = [
        f"molecule beh2 point={point.upper()}",
        "geometry Be 0.0 0.0 0.0 bohr",
        f"geometry H 0.0 {ys} {zs} bohr",
        f"geometry H 0.0 -{ys} {zs} bohr",
    ]
    return atoms, 6, comments


def generate(molecule: str, point: str, out: str) -> None:
    if molecule == "h2o":
        atoms, n_electrons, comments = h2o_geometry(float(point))
    elif molecule == "beh2":
        atoms, n_electrons, comments = beh2_geometry(point)
    else:
        raise SystemExit(f"unknown molecule {molecule!r}")
    scf = run_rhf(atoms, n_electrons)
    c, labels = label_orbitals(scf)
    emit_system(out, scf, c, labels, n_frozen=1, comments=comments)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--molecule", required=True, choices=("h2o", "beh2"))
    parser.add_argument("--point", required=True,
                        help="O-H distance in Angstrom (h2o) or point tag A..I (beh2)")
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)
    try:
        generate(args.molecule, args.point, args.out)
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
