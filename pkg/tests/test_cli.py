import csv
import io
import json
import math

import numpy as np
import pytest

from torvdw.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    header, data = rows[0], rows[1:]
    cols = {name: np.array([float(r[i]) for r in data]) for i, name in enumerate(header)}
    return header, cols


class TestGeom:
    def test_happy_path(self, capsys):
        code, out, _ = run_cli(capsys, "geom", "--a", "5", "--b", "3")
        assert code == 0
        assert "f         = 4 nm" in out
        assert "1.66666666667" in out

    def test_thin_ring_focal_scale(self, capsys):
        code, out, _ = run_cli(capsys, "geom", "--a", "5", "--b", "1")
        assert code == 0
        assert "4.89897948557" in out

    def test_inverted_radii_is_config_error(self, capsys):
        code, _, err = run_cli(capsys, "geom", "--a", "3", "--b", "5")
        assert code == 2
        assert "configuration error" in err


class TestPotential:
    def test_axis_cut_symmetric_and_normalized(self, capsys):
        code, out, _ = run_cli(
            capsys, "potential", "--a", "5", "--b", "1",
            "--zmin", "-12", "--zmax", "12", "--zpoints", "25",
        )
        assert code == 0
        header, cols = read_csv(out)
        assert header == ["z_nm", "VH_V", "VH_norm"]
        mid = 12
        assert cols["z_nm"][mid] == 0.0
        assert cols["VH_norm"][mid] == pytest.approx(-1.0, rel=1e-14)
        np.testing.assert_allclose(cols["VH_V"], cols["VH_V"][::-1], rtol=1e-12)
        assert np.all(np.isfinite(cols["VH_V"]))

    def test_asymmetric_source_skew(self, capsys):
        code, out, _ = run_cli(
            capsys, "potential", "--a", "5", "--b", "1", "--source-z", "3",
            "--zmin", "-10", "--zmax", "10", "--zpoints", "21",
        )
        assert code == 0
        _, cols = read_csv(out)
        v = cols["VH_V"]
        z = cols["z_nm"]
        assert abs(v[z == 5.0][0]) > abs(v[z == -5.0][0])

    def test_plane_cut_even_and_finite(self, capsys):
        code, out, _ = run_cli(
            capsys, "potential", "--a", "4", "--b", "1", "--cut", "plane",
            "--zpoints", "17",
        )
        assert code == 0
        header, cols = read_csv(out)
        assert header[0] == "r_nm"
        assert np.all(np.isfinite(cols["VH_V"]))
        assert cols["VH_norm"][0] == pytest.approx(-1.0, rel=1e-14)
        assert np.all(cols["r_nm"] < 3.0)  # restricted to r < a - b

    def test_truncation_is_numerical_failure(self, capsys):
        code, _, err = run_cli(
            capsys, "potential", "--a", "5", "--b", "3", "--ncap", "8",
        )
        assert code == 3
        assert "numerical failure" in err


class TestChargeEnergy:
    def test_normalized_peak_and_decay(self, capsys):
        code, out, _ = run_cli(
            capsys, "charge-energy", "--a", "5", "--b", "1",
            "--zmin", "-16", "--zmax", "16", "--zpoints", "33",
        )
        assert code == 0
        header, cols = read_csv(out)
        assert header == ["zprime_nm", "U_eV", "U_norm"]
        z, u = cols["zprime_nm"], cols["U_norm"]
        assert u[z == 0.0][0] == pytest.approx(-1.0, rel=1e-14)
        right = np.abs(u[z >= 0.0])
        assert np.all(np.diff(right) < 0.0)
        np.testing.assert_allclose(u, u[::-1], rtol=1e-12)


class TestVdw:
    def test_force_zero_at_origin_and_signs_thin(self, capsys):
        code, out, _ = run_cli(
            capsys, "vdw", "--a", "5", "--b", "1", "--quantity", "force",
            "--zmin", "-8", "--zmax", "8", "--zpoints", "33",
        )
        assert code == 0
        header, cols = read_csv(out)
        assert header == ["zp_nm", "F_eV_per_nm", "F_norm"]
        z, force = cols["zp_nm"], cols["F_eV_per_nm"]
        assert force[z == 0.0][0] == 0.0
        assert force[z == 1.0][0] > 0.0   # repulsive close in
        assert force[z == 8.0][0] < 0.0   # attractive far out
        np.testing.assert_allclose(force, -force[::-1], rtol=1e-12, atol=1e-300)

    def test_all_attractive_near_degenerate(self, capsys):
        code, out, _ = run_cli(
            capsys, "vdw", "--a", "5", "--b", "4.5", "--quantity", "force",
            "--zmin", "0", "--zmax", "10", "--zpoints", "21",
        )
        assert code == 0
        _, cols = read_csv(out)
        z, force = cols["zp_nm"], cols["F_eV_per_nm"]
        assert np.all(force[z > 0.0] < 0.0)

    def test_both_quantities_consistent(self, capsys):
        code, out, _ = run_cli(
            capsys, "vdw", "--a", "5", "--b", "1", "--quantity", "both",
            "--zmin", "-5", "--zmax", "5", "--zpoints", "401",
        )
        assert code == 0
        header, cols = read_csv(out)
        assert header == ["zp_nm", "U_eV", "U_norm", "F_eV_per_nm", "F_norm"]
        z, u, force = cols["zp_nm"], cols["U_eV"], cols["F_eV_per_nm"]
        h = z[1] - z[0]
        fd = -(u[2:] - u[:-2]) / (2.0 * h)
        # skip the immediate neighborhood of the force zero, where the
        # absolute h^2 truncation error dominates a vanishing force
        mask = np.abs(force[1:-1]) > 1e-5
        np.testing.assert_allclose(fd[mask], force[1:-1][mask], rtol=2e-3)

    def test_dipole_unit_conversion(self, capsys):
        from torvdw.units import DEBYE2_TO_E2NM2

        base = ["vdw", "--a", "5", "--b", "1", "--quantity", "energy",
                "--zmin", "0", "--zmax", "2", "--zpoints", "3"]
        code, out_e, _ = run_cli(capsys, *base, "--d2z", "1")
        assert code == 0
        code, out_d, _ = run_cli(capsys, *base, "--d2z", "1",
                                 "--d2z-unit", "debye2")
        assert code == 0
        _, cols_e = read_csv(out_e)
        _, cols_d = read_csv(out_d)
        np.testing.assert_allclose(
            cols_d["U_eV"], DEBYE2_TO_E2NM2 * cols_e["U_eV"], rtol=1e-12
        )

    def test_energy_normalization_reference(self, capsys):
        code, out, _ = run_cli(
            capsys, "vdw", "--a", "5", "--b", "1", "--quantity", "energy",
            "--zmin", "2", "--zmax", "6", "--zpoints", "5",
        )
        # the normalization reference is |U(0)| even when 0 is off-grid
        assert code == 0
        _, cols = read_csv(out)
        assert cols["U_norm"][0] == pytest.approx(
            cols["U_eV"][0] / 0.0008125136704195568, rel=1e-10
        )


class TestSweepRatio:
    def test_crossings_increase_with_height(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep-ratio", "--b", "1", "--zp", "1", "--zp", "2",
            "--zp", "3", "--ratio-min", "1.5", "--ratio-max", "10",
            "--ratio-points", "120", "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        crossings = payload["diagnostics"]["zero_crossings_a_over_b"]
        assert crossings["zp=1"] < crossings["zp=2"] < crossings["zp=3"]
        assert crossings["zp=1"] == pytest.approx(3.5528, rel=2e-2)

    def test_every_column_turns_repulsive(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep-ratio", "--b", "1", "--zp", "1", "--zp", "4",
            "--ratio-min", "1.5", "--ratio-max", "12", "--ratio-points", "60",
        )
        assert code == 0
        _, cols = read_csv(out)
        for name in ("F_zp1_eV_per_nm", "F_zp4_eV_per_nm"):
            col = cols[name]
            assert col[0] < 0.0 and col[-1] > 0.0
            assert np.count_nonzero(np.diff(col > 0.0)) == 1  # single crossing


class TestContour:
    def test_matrix_and_script(self, tmp_path, capsys):
        out_file = tmp_path / "grid.csv"
        code, _, _ = run_cli(
            capsys, "contour", "--b", "1", "--ratio-min", "2", "--ratio-max", "8",
            "--ratio-points", "7", "--zmin", "-6", "--zmax", "6",
            "--zpoints", "13", "--out", str(out_file),
        )
        assert code == 0
        rows = list(csv.reader(out_file.open()))
        assert int(rows[0][0]) == 7  # nonuniform-matrix column count
        ratios = np.array([float(v) for v in rows[0][1:]])
        zps = np.array([float(r[0]) for r in rows[1:]])
        force = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
        np.testing.assert_allclose(force, -force[::-1, :], rtol=1e-12, atol=1e-300)
        script = (out_file.parent / "grid.csv.gp").read_text()
        assert "nonuniform matrix" in script
        assert "grid.csv" in script

        # a cut through the grid agrees with the vdw command
        code, out, _ = run_cli(
            capsys, "vdw", "--a", str(ratios[3]), "--b", "1",
            "--quantity", "force", "--zmin", "-6", "--zmax", "6",
            "--zpoints", "13",
        )
        assert code == 0
        _, cols = read_csv(out)
        np.testing.assert_allclose(force[:, 3], cols["F_eV_per_nm"], rtol=1e-12)

    def test_requires_out(self, capsys):
        code, _, err = run_cli(capsys, "contour", "--b", "1")
        assert code == 2
        assert "requires --out" in err


class TestValidate:
    def test_battery_passes(self, capsys):
        code, out, _ = run_cli(capsys, "validate")
        assert code == 0
        assert out.count("PASS") >= 5
        assert "FAIL" not in out


class TestOutputContracts:
    def test_csv_deterministic_and_rfc4180(self, tmp_path, capsys):
        args = [
            "vdw", "--a", "5", "--b", "1", "--zmin", "-3", "--zmax", "3",
            "--zpoints", "11",
        ]
        f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(f1)]) == 0
        assert main(args + ["--out", str(f2)]) == 0
        b1, b2 = f1.read_bytes(), f2.read_bytes()
        assert b1 == b2
        assert b"\r\n" in b1

    def test_json_schema(self, capsys):
        code, out, _ = run_cli(
            capsys, "potential", "--a", "5", "--b", "1", "--zpoints", "5",
            "--zmin", "-2", "--zmax", "2", "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        assert set(payload) == {"config", "columns", "rows", "diagnostics"}
        assert payload["config"]["version"]
        assert payload["config"]["a"] == 5.0
        assert len(payload["diagnostics"]["n_used"]) == 5
        assert len(payload["rows"]) == 5

    @pytest.mark.parametrize("cmd", ["charge-energy", "vdw"])
    def test_per_point_diagnostics(self, capsys, cmd):
        code, out, _ = run_cli(
            capsys, cmd, "--a", "5", "--b", "1", "--zpoints", "7",
            "--zmin", "-3", "--zmax", "3", "--format", "json",
        )
        assert code == 0
        n_used = json.loads(out)["diagnostics"]["n_used"]
        assert len(n_used) == 7
        assert all(isinstance(n, int) and n >= 3 for n in n_used)

    def test_no_normalize_flag(self, capsys):
        code, out, _ = run_cli(
            capsys, "potential", "--a", "5", "--b", "1", "--zpoints", "5",
            "--zmin", "-2", "--zmax", "2", "--no-normalize",
        )
        assert code == 0
        header, _ = read_csv(out)
        assert header == ["z_nm", "VH_V"]

    def test_tol_ordering(self, capsys):
        # looser tolerance must not beat the tighter one on the BC residual
        from torvdw import axial_greens, axial_source, surface_residual, toroid_from_radii

        geom = toroid_from_radii(5.0, 3.0)
        src = axial_source(0.0, geom)
        loose = surface_residual(src, axial_greens(geom, rel_tol=1e-6), 32)
        tight = surface_residual(src, axial_greens(geom, rel_tol=1e-12), 32)
        assert tight < loose
