"""End-to-end dump generation checked through the solver package's parser."""

import subprocess
import sys
from pathlib import Path

import pytest

from sectorvqe.system import parse_system, hartree_fock_energy

from generate import BEH2_POINTS, generate

GENERATOR_DIR = Path(__file__).parent.parent


@pytest.fixture(scope="module")
def beh2_e(tmp_path_factory):
    out = tmp_path_factory.mktemp("dumps") / "beh2_E.dump"
    generate("beh2", "E", str(out))
    return out


@pytest.fixture(scope="module")
def h2o_10(tmp_path_factory):
    out = tmp_path_factory.mktemp("dumps") / "h2o_10.dump"
    generate("h2o", "1.0", str(out))
    return out


class TestBeH2:
    def test_active_space_shape(self, beh2_e):
        system = parse_system(beh2_e)
        assert system.n_spatial == 6
        assert system.n_electrons == 4
        assert system.point_group == "C2v"

    def test_hf_energy_recomputed(self, beh2_e):
        system = parse_system(beh2_e)
        assert abs(hartree_fock_energy(system) - system.hf_energy) < 1e-8

    def test_table_coordinates_verbatim(self, beh2_e):
        text = beh2_e.read_text()
        assert "# geometry H 0.0 1.16 3.00 bohr" in text
        assert "# geometry H 0.0 -1.16 3.00 bohr" in text
        assert "# geometry Be 0.0 0.0 0.0 bohr" in text

    def test_all_points_tabulated(self):
        assert sorted(BEH2_POINTS) == list("ABCDEFGHI")
        assert BEH2_POINTS["A"] == ("1.62", "2.00")
        assert BEH2_POINTS["I"] == ("0.70", "4.00")


class TestH2O:
    def test_active_space_shape(self, h2o_10):
        system = parse_system(h2o_10)
        assert system.n_spatial == 6
        assert system.n_electrons == 8

    def test_hf_energy_recomputed(self, h2o_10):
        system = parse_system(h2o_10)
        assert abs(hartree_fock_energy(system) - system.hf_energy) < 1e-8

    def test_dipole_block_present(self, h2o_10):
        system = parse_system(h2o_10)
        assert system.dipole_z is not None
        assert system.nuclear_dipole_z != 0.0


def test_regeneration_is_deterministic(tmp_path):
    a = tmp_path / "a.dump"
    b = tmp_path / "b.dump"
    generate("beh2", "C", str(a))
    generate("beh2", "C", str(b))
    assert a.read_text() == b.read_text()


def test_cli_entrypoint(tmp_path):
    out = tmp_path / "cli.dump"
    proc = subprocess.run(
        [sys.executable, str(GENERATOR_DIR / "generate.py"),
         "--molecule", "beh2", "--point", "I", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    system = parse_system(out)
    assert system.n_electrons == 4


def test_unknown_point_rejected(tmp_path):
    with pytest.raises(SystemExit):
        generate("beh2", "Z", str(tmp_path / "z.dump"))


def test_committed_fixtures_match_regeneration(tmp_path):
    """The dumps committed for the solver tests come from this generator."""
    committed = Path(__file__).parent.parent.parent / "tests" / "fixtures"
    sample = committed / "beh2_D.dump"
    if not sample.is_file():
        pytest.skip("fixtures not committed")
    fresh = tmp_path / "beh2_D.dump"
    generate("beh2", "D", str(fresh))
    assert fresh.read_text() == sample.read_text()
