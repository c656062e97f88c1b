"""Dump parsing, irrep algebra, and round-trip fidelity."""

import numpy as np
import pytest

from sectorvqe.system import (
    POINT_GROUPS,
    DumpParseError,
    DumpValidationError,
    IrrepLabel,
    hartree_fock_energy,
    irrep_product,
    parse_system,
    serialize_system,
)


def write(tmp_path, text, name="sys.dump"):
    path = tmp_path / name
    path.write_text(text)
    return path


BASIC = """\
&SYS NORB=2 NELEC=2 GROUP=C2v EHF=-1.5
# a comment line
ORBSYM=A1,B2
0.5 1 1 1 1
0.25 1 1 2 2
-1.0 1 1 0 0
-0.5 2 2 0 0
0.125 1 2 0 0
0.3 1 0 0 0
0.05 1 2 -1 -1
0.7 0 0 0 0
1.25 0 0 0 -1
"""


def test_parse_basic(tmp_path):
    sys = parse_system(write(tmp_path, BASIC))
    assert sys.n_spatial == 2
    assert sys.n_electrons == 2
    assert sys.point_group == "C2v"
    assert sys.hf_energy == -1.5
    assert sys.core_energy == 0.7
    assert sys.nuclear_dipole_z == 1.25
    assert sys.h2[0, 0, 0, 0] == 0.5
    assert sys.h1[0, 1] == sys.h1[1, 0] == 0.125
    assert sys.dipole_z[0, 0] == 0.3
    assert sys.dipole_z[1, 0] == 0.05
    assert [x.name for x in sys.irreps] == ["A1", "B2"]


def test_eightfold_symmetry_materialized(tmp_path):
    text = (
        "&SYS NORB=4 NELEC=2 GROUP=C1 EHF=0.0\n"
        "ORBSYM=A,A,A,A\n"
        "0.625 1 2 3 4\n"
        "0.0 0 0 0 0\n"
    )
    sys = parse_system(write(tmp_path, text))
    v = sys.h2[0, 1, 2, 3]
    for key in [(1, 0, 2, 3), (0, 1, 3, 2), (1, 0, 3, 2),
                (2, 3, 0, 1), (3, 2, 0, 1), (2, 3, 1, 0), (3, 2, 1, 0)]:
        assert sys.h2[key] == v == 0.625


def test_absent_entries_are_zero(tmp_path):
    text = (
        "&SYS NORB=3 NELEC=2 GROUP=C1 EHF=0.0\n"
        "ORBSYM=A,A,A\n"
        "1.0 1 1 0 0\n"
        "2.0 2 2 0 0\n"
        "3.0 3 3 0 0\n"
        "0.0 0 0 0 0\n"
    )
    sys = parse_system(write(tmp_path, text))
    assert np.allclose(sys.h1, np.diag([1.0, 2.0, 3.0]))
    assert np.count_nonzero(sys.h2) == 0


def test_malformed_line_reports_lineno(tmp_path):
    bad = BASIC.replace("0.25 1 1 2 2", "0.25 1 1 2")
    with pytest.raises(DumpParseError, match=":5:"):
        parse_system(write(tmp_path, bad))


def test_conflicting_duplicate_is_validation_error(tmp_path):
    bad = BASIC + "0.11 2 2 1 1\n"  # (22|11) must equal (11|22)=0.25
    with pytest.raises(DumpValidationError, match="conflicts"):
        parse_system(write(tmp_path, bad))


def test_consistent_duplicate_is_fine(tmp_path):
    sys = parse_system(write(tmp_path, BASIC + "0.25 2 2 1 1\n"))
    assert sys.h2[1, 1, 0, 0] == 0.25


def test_orbsym_count_mismatch(tmp_path):
    bad = BASIC.replace("ORBSYM=A1,B2", "ORBSYM=A1,B2,B1")
    with pytest.raises(DumpValidationError, match="ORBSYM"):
        parse_system(write(tmp_path, bad))


def test_bad_irrep_label(tmp_path):
    bad = BASIC.replace("ORBSYM=A1,B2", "ORBSYM=A1,E1")
    with pytest.raises(DumpValidationError):
        parse_system(write(tmp_path, bad))


def test_missing_header_key(tmp_path):
    bad = BASIC.replace(" EHF=-1.5", "")
    with pytest.raises(DumpParseError, match="EHF"):
        parse_system(write(tmp_path, bad))


def test_roundtrip_bit_exact(tmp_path, h2_system):
    rng = np.random.default_rng(3)
    n = 3
    h1 = (lambda m: m + m.T)(rng.normal(size=(n, n)))
    h2 = np.zeros((n,) * 4)
    for p in range(n):
        for q in range(p + 1):
            for r in range(n):
                for s in range(r + 1):
                    if (p, q) < (r, s):
                        continue
                    v = rng.normal()
                    for i, j in ((p, q), (q, p)):
                        for k, l in ((r, s), (s, r)):
                            h2[i, j, k, l] = v
                            h2[k, l, i, j] = v
    from sectorvqe.system import MolecularSystem

    sys1 = MolecularSystem(
        n_spatial=n, n_electrons=2, core_energy=rng.normal(), h1=h1, h2=h2,
        irreps=tuple(IrrepLabel.from_name("C1", "A") for _ in range(n)),
        point_group="C1", hf_energy=rng.normal(),
        dipole_z=(lambda m: m + m.T)(rng.normal(size=(n, n))),
        nuclear_dipole_z=rng.normal(),
    )
    p1 = tmp_path / "a.dump"
    serialize_system(sys1, p1)
    sys2 = parse_system(p1)
    assert np.array_equal(sys1.h1, sys2.h1)
    assert np.array_equal(sys1.h2, sys2.h2)
    assert np.array_equal(sys1.dipole_z, sys2.dipole_z)
    assert sys1.core_energy == sys2.core_energy
    assert sys1.nuclear_dipole_z == sys2.nuclear_dipole_z
    assert sys1.hf_energy == sys2.hf_energy
    # serializing again reproduces the identical file
    p2 = tmp_path / "b.dump"
    serialize_system(sys2, p2)
    assert p1.read_text() == p2.read_text()


def test_hf_energy_matches_header(h2_dump):
    sys = parse_system(h2_dump)
    assert hartree_fock_energy(sys) == pytest.approx(sys.hf_energy, abs=1e-8)
    # textbook H2/STO-3G total energy
    assert sys.hf_energy == pytest.approx(-1.1167, abs=5e-4)


class TestIrrepProduct:
    def test_c2v_table(self):
        b1 = IrrepLabel.from_name("C2v", "B1")
        b2 = IrrepLabel.from_name("C2v", "B2")
        a2 = IrrepLabel.from_name("C2v", "A2")
        assert irrep_product(b1, b2).name == "A2"
        assert irrep_product(a2, b1).name == "B2"

    def test_self_product_is_totally_symmetric(self):
        for group, names in POINT_GROUPS.items():
            for name in names:
                lbl = IrrepLabel.from_name(group, name)
                assert irrep_product(lbl, lbl).is_totally_symmetric

    def test_group_mismatch(self):
        a = IrrepLabel.from_name("C2v", "A1")
        b = IrrepLabel.from_name("D2", "B1")
        with pytest.raises(ValueError):
            irrep_product(a, b)

    def test_xor_is_closed_and_abelian(self):
        for group, names in POINT_GROUPS.items():
            labels = [IrrepLabel.from_name(group, n) for n in names]
            for a in labels:
                for b in labels:
                    ab = irrep_product(a, b)
                    assert ab.name in names
                    assert ab == irrep_product(b, a)


def test_h2o_fixture_active_space():
    from conftest import fixture_dump

    sys = parse_system(fixture_dump("h2o_0.9.dump"))
    assert sys.n_spatial == 6
    assert sys.n_electrons == 8
    assert sys.point_group == "C2v"
    assert hartree_fock_energy(sys) == pytest.approx(sys.hf_energy, abs=1e-8)
