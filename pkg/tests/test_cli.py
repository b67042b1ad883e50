import hashlib
import subprocess
import sys

import numpy as np
import pytest

from susyqm.cli import CSV_BANNER, fmt, grid_axis, main


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0] == CSV_BANNER
    header = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:]]
    return header, rows


def numeric(rows):
    return np.array([[float(v) for v in row] for row in rows])


def manifest(path):
    return dict(line.split("=", 1) for line in path.read_text().splitlines())


def digests_match(directory, man):
    for key, value in man.items():
        if key.startswith("output."):
            name = key[len("output."):]
            assert value == "sha256:" + hashlib.sha256((directory / name).read_bytes()).hexdigest()


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def test_verify_hydrogen_analytic(tmp_path, capsys):
    code, out = run(["verify-hydrogen", "--path", "analytic", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert "FAIL" not in out
    assert out.count("PASS") == 11
    header, rows = read_csv(tmp_path / "hydrogen_checks.csv")
    assert header == ["check", "max_residual", "mean_residual", "status"]
    assert len(rows) == 11
    man = manifest(tmp_path / "manifest.txt")
    assert man["command"] == "verify-hydrogen"
    digests_match(tmp_path, man)


def test_verify_hydrogen_numeric(capsys):
    code, out = run(["verify-hydrogen", "--path", "numeric", "--points", "500"], capsys)
    assert code == 0
    assert "FAIL" not in out
    assert "# manifest" in out


def test_verify_hydrogen_bad_path():
    with pytest.raises(SystemExit) as exc:
        main(["verify-hydrogen", "--path", "bogus"])
    assert exc.value.code == 2


def test_grid_axis_is_bit_symmetric():
    for n in (2, 7, 200, 201):
        ax = grid_axis(10.0, n)
        assert len(ax) == n
        assert np.array_equal(ax, -ax[::-1])
        assert np.all(np.diff(ax) > 0)
    assert grid_axis(10.0, 201)[100] == 0.0


def export(tmp_path, state, plane="xy", resolution=41, extent=5.0):
    out = tmp_path / f"{state}_{plane}"
    code = main(["sector2-export", "--state", state, "--plane", plane,
                 "--extent", str(extent), "--resolution", str(resolution), "--out", str(out)])
    assert code == 0
    return out


def grid(out, state, plane, comp, n):
    header, rows = read_csv(out / f"{state}_{plane}_{comp}.csv")
    assert header == ["u", "v", "value"]
    data = numeric(rows)
    return data[:, 0].reshape(n, n), data[:, 1].reshape(n, n), data[:, 2].reshape(n, n)


def test_sector2_export_files_and_manifest(tmp_path, capsys):
    out = export(tmp_path, "2s")
    capsys.readouterr()
    names = sorted(p.name for p in out.iterdir())
    assert names == ["2s_xy_x.csv", "2s_xy_y.csv", "2s_xy_z.csv", "manifest.txt"]
    man = manifest(out / "manifest.txt")
    assert man["param.state"] == "2s" and man["param.resolution"] == "41"
    digests_match(out, man)


def test_sector2_export_2s_parity(tmp_path, capsys):
    n = 41
    out = export(tmp_path, "2s", resolution=n)
    capsys.readouterr()
    _, _, fx = grid(out, "2s", "xy", "x", n)
    _, _, fy = grid(out, "2s", "xy", "y", n)
    _, _, fz = grid(out, "2s", "xy", "z", n)
    # x component: odd in u (x), even in v (y)
    assert np.array_equal(fx[::-1, :], -fx)
    assert np.array_equal(fx[:, ::-1], fx)
    assert np.array_equal(fy[:, ::-1], -fy)
    assert np.array_equal(fy[::-1, :], fy)
    assert np.all(fz == 0)
    c = n // 2
    assert fx[c, c] == 0 and fy[c, c] == 0


def test_sector2_export_2px_first_component(tmp_path, capsys):
    n = 41
    for plane in ("xy", "xz", "yz"):
        out = export(tmp_path, "2px", plane=plane, resolution=n)
        capsys.readouterr()
        _, _, fx = grid(out, "2px", plane, "x", n)
        if plane == "xy" or plane == "xz":
            assert np.array_equal(fx[:, ::-1], fx)  # even in y or z
        else:
            assert np.array_equal(fx[::-1, :], fx) and np.array_equal(fx[:, ::-1], fx)
        c = n // 2
        assert fx[c, c] > 0
        assert np.all(fx[c - 1:c + 2, c - 1:c + 2] > 0)


def test_sector2_export_axis_line(tmp_path, capsys):
    out = tmp_path / "line"
    assert main(["sector2-export", "--state", "2pz", "--plane", "z", "--resolution", "11", "--out", str(out)]) == 0
    capsys.readouterr()
    header, rows = read_csv(out / "2pz_z_z.csv")
    assert header == ["u", "value"]
    assert len(rows) == 11


def test_sector2_export_usage_errors(tmp_path):
    for argv in (
        ["sector2-export", "--state", "3d", "--out", str(tmp_path)],
        ["sector2-export", "--state", "2s", "--resolution", "1", "--out", str(tmp_path)],
        ["sector2-export", "--state", "2s", "--extent", "-1", "--out", str(tmp_path)],
        ["sector2-export", "--state", "2s"],
    ):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2


def test_sector2_export_io_error(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["sector2-export", "--state", "2s", "--out", str(blocker / "sub")]) == 1


def test_vmc_helium_small_run_and_csv(tmp_path, capsys):
    out = tmp_path / "curve.csv"
    argv = ["vmc-helium", "--scan", "0.2,0.353", "--walkers", "8", "--steps", "400", "--burn", "100",
            "--seed", "3", "--out", str(out)]
    code, text = run(argv, capsys)
    assert code == 0
    assert "argmin alpha" in text
    header, rows = read_csv(out)
    assert header == ["alpha", "mean", "std_error", "acceptance", "blocks", "n_samples"]
    assert [r[0] for r in rows] == ["0.2", "0.353"]
    man = manifest(tmp_path / "curve.csv.manifest")
    assert man["seed"] == "3"
    digests_match(tmp_path, man)


@pytest.mark.parametrize(
    "argv",
    [
        ["vmc-helium", "--alpha", "-1"],
        ["vmc-helium", "--alpha", "0.3", "--steps", "100", "--burn", "100"],
        ["vmc-helium"],
        ["vmc-helium", "--scan", "0.1,abc"],
    ],
)
def test_vmc_helium_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_vmc_helium_reference_command(capsys):
    code, text = run(["vmc-helium", "--alpha", "0.353", "--walkers", "64", "--steps", "20000",
                      "--burn", "2000", "--seed", "7"], capsys)
    assert code == 0
    mean = float(text.splitlines()[1].split()[1])
    assert -2.888 <= mean <= -2.868


@pytest.mark.parametrize("mode", ["triplet", "singlet"])
@pytest.mark.parametrize("context", ["pj", "bare", "none"])
def test_aufbau_symmetry_passes(mode, context, capsys):
    code, out = run(["aufbau", "--mode", mode, "--context", context], capsys)
    assert code == 0
    assert "exchange symmetry" in out and "PASS" in out


def test_aufbau_correlated_and_regeneration_report(tmp_path, capsys):
    code, out = run(["aufbau", "--mode", "singlet", "--correlated", "--delta", "0.353",
                     "--check-regeneration", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert "state=correlated_singlet" in out
    assert "regeneration: cosine similarity" in out
    header, rows = read_csv(tmp_path / "aufbau_correlated_singlet.csv")
    assert len(header) == 12 and len(rows) == 100
    digests_match(tmp_path, manifest(tmp_path / "manifest.txt"))


def test_aufbau_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["aufbau", "--mode", "quintet"])
    assert exc.value.code == 2


def test_fmt_is_round_trip_and_locale_free():
    for v in (0.353, -2.878, 1e-300, 0.1 + 0.2, -0.0):
        s = fmt(v)
        assert "," not in s
        assert float(s) == v
    assert fmt(-0.0) == "0.0"


def test_console_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "susyqm.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "susyqm" in proc.stdout


def test_reruns_are_byte_identical(tmp_path, capsys):
    dirs = []
    for k in range(2):
        d = tmp_path / f"run{k}"
        assert main(["aufbau", "--mode", "triplet", "--context", "bare", "--seed", "4", "--out", str(d)]) == 0
        assert main(["verify-hydrogen", "--seed", "4", "--out", str(d / "h")]) == 0
        assert main(["sector2-export", "--state", "2py", "--resolution", "21", "--out", str(d / "g")]) == 0
        assert main(["vmc-helium", "--alpha", "0.3", "--walkers", "4", "--steps", "200", "--burn", "50",
                     "--seed", "4", "--out", str(d / "v.csv")]) == 0
        dirs.append(d)
    capsys.readouterr()
    files = sorted(p.relative_to(dirs[0]) for p in dirs[0].rglob("*") if p.is_file())
    assert len(files) == 10
    for rel in files:
        assert (dirs[0] / rel).read_bytes() == (dirs[1] / rel).read_bytes()
