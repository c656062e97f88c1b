"""Determinant irreps, (m, e) selection, and reference determinants."""

import pytest

from sectorvqe.symmetry import (
    SectorUnreachableError,
    build_reference,
    determinant_irrep,
    hf_determinant,
)
from sectorvqe.system import IrrepLabel


def test_closed_shell_hf_is_totally_symmetric(h2_system, toy3_system):
    for sys in (h2_system, toy3_system):
        hf = hf_determinant(sys)
        assert determinant_irrep(hf, sys.irreps).is_totally_symmetric


def test_empty_determinant_is_totally_symmetric(h2_system):
    assert determinant_irrep(0, h2_system.irreps).is_totally_symmetric


def test_open_shell_label(toy3_system):
    # vacate orbital 1 (B1) down, occupy orbital 2 (A1) down: product B1
    hf = hf_determinant(toy3_system)
    n = toy3_system.n_spatial
    det = hf & ~(1 << (1 + n)) | (1 << (2 + n))
    assert determinant_irrep(det, toy3_system.irreps).name == "B1"


class TestBuildReference:
    def test_two_orbital_walkthrough(self, h2_system):
        spec = build_reference(h2_system.irrep("B2"), 0, h2_system)
        assert (spec.m, spec.e) == (0, 1)
        assert spec.phi_A == 0b0110
        assert spec.phi_B == 0b1001

    def test_reference_irreps_match_sigma(self, toy3_system):
        for name in ("A1", "B1"):
            for spin in (0, 1):
                spec = build_reference(toy3_system.irrep(name), spin, toy3_system)
                assert determinant_irrep(spec.phi_A, toy3_system.irreps).name == name
                assert determinant_irrep(spec.phi_B, toy3_system.irreps).name == name

    def test_electron_count_and_sz(self, toy3_system):
        spec = build_reference(toy3_system.irrep("B1"), 1, toy3_system)
        n = toy3_system.n_spatial
        for det in (spec.phi_A, spec.phi_B):
            assert det.bit_count() == toy3_system.n_electrons
            ups = (det & ((1 << n) - 1)).bit_count()
            assert 2 * ups == toy3_system.n_electrons

    def test_differs_from_hf_in_two_spinorbitals(self, toy3_system):
        spec = build_reference(toy3_system.irrep("B1"), 0, toy3_system)
        hf = hf_determinant(toy3_system)
        assert (spec.phi_A ^ hf).bit_count() == 2
        assert (spec.phi_B ^ hf).bit_count() == 2

    def test_spin_complement_on_open_shells(self, toy3_system):
        spec = build_reference(toy3_system.irrep("B1"), 0, toy3_system)
        n = toy3_system.n_spatial
        flip = 0
        for p in (spec.m, spec.e):
            flip |= (1 << p) | (1 << (p + n))
        # swapping the up/down occupations of m and e maps phi_A to phi_B
        up = spec.phi_A & ((1 << n) - 1) & flip
        dn = (spec.phi_A >> n) & flip
        swapped = (spec.phi_A & ~flip & ~(flip << n)) | (dn & ((1 << n) - 1)) | (up << n)
        assert swapped == spec.phi_B

    def test_sector_unreachable(self, h2_system):
        with pytest.raises(SectorUnreachableError, match="reachable"):
            build_reference(h2_system.irrep("A2"), 0, h2_system)

    def test_energetic_pair_selection(self, toy3_system):
        # A1 target: candidates (m=0, e=2) and ... m must be occupied {0,1},
        # e empty {2}; products: 0(A1)x2(A1)=A1, 1(B1)x2(A1)=B1
        spec = build_reference(toy3_system.irrep("A1"), 0, toy3_system)
        assert (spec.m, spec.e) == (0, 2)

    def test_pair_override(self, toy3_system):
        spec = build_reference(toy3_system.irrep("B1"), 0, toy3_system, pair=(1, 2))
        assert (spec.m, spec.e) == (1, 2)
        with pytest.raises(ValueError, match="does not realize"):
            build_reference(toy3_system.irrep("B1"), 0, toy3_system, pair=(0, 2))

    def test_single_determinant_mode(self, toy3_system):
        hf = hf_determinant(toy3_system)
        spec = build_reference(
            toy3_system.irrep("A1"), 0, toy3_system, allow_single_determinant=True
        )
        assert spec.single_determinant
        assert spec.phi_A == spec.phi_B == hf
        with pytest.raises(ValueError, match="totally symmetric"):
            build_reference(
                toy3_system.irrep("B1"), 0, toy3_system,
                allow_single_determinant=True,
            )

    def test_invalid_spin(self, toy3_system):
        with pytest.raises(ValueError, match="spin"):
            build_reference(toy3_system.irrep("B1"), 2, toy3_system)

    def test_group_mismatch(self, toy3_system):
        with pytest.raises(ValueError, match="group"):
            build_reference(IrrepLabel.from_name("D2", "B1"), 0, toy3_system)


def test_h2o_open_shell_b1_label():
    """Vacating the b1 lone pair (down) and occupying the lowest a1 virtual."""
    from conftest import fixture_dump
    from sectorvqe.system import parse_system

    sys = parse_system(fixture_dump("h2o_0.9.dump"))
    hf = hf_determinant(sys)
    n = sys.n_spatial
    names = [x.name for x in sys.irreps]
    m = names.index("B1")                         # occupied b1 lone pair
    e = next(k for k in range(sys.n_occupied, n) if names[k] == "A1")
    det = hf & ~(1 << (m + n)) | (1 << (e + n))   # move the down electron
    assert determinant_irrep(det, sys.irreps).name == "B1"
