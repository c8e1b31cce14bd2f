import csv
import io
import json
import os

import numpy as np
import pytest

from dce_mirror import io as dio
from dce_mirror.cli import main, read_config_file
from dce_mirror.sweep import AxisRange, sweep_normalized_rate


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_fmt_round_trips():
    for x in (0.1, 1 / 3, 1e-300, 123456789.123456789):
        assert float(dio.fmt(x)) == x


def test_atomic_write_replaces_and_cleans_up(tmp_path):
    target = tmp_path / "a.csv"
    dio.atomic_write(target, "one\n")
    dio.atomic_write(target, "two\n")
    assert target.read_text() == "two\n"
    assert os.listdir(tmp_path) == ["a.csv"]


def test_atomic_write_failure_leaves_old_file(tmp_path):
    target = tmp_path / "a.csv"
    target.write_text("old\n")

    class Boom:
        def __str__(self):
            raise RuntimeError

    with pytest.raises(TypeError):
        dio.atomic_write(target, Boom())
    assert target.read_text() == "old\n"
    assert os.listdir(tmp_path) == ["a.csv"]


def test_sweep_json_round_trip():
    grid = sweep_normalized_rate(1.0, 1.0, AxisRange(0.0, 2.0, 3), AxisRange(-1.0, 1.0, 3))
    back = dio.sweep_from_dict(json.loads(dio.sweep_json(grid)))
    np.testing.assert_array_equal(back.values, grid.values)
    assert back.kind is grid.kind
    rows = list(csv.reader(io.StringIO(dio.sweep_csv(grid))))
    assert rows[0] == ["chi0", "lambda0", "value"]
    assert len(rows) == 10
    assert float(rows[4][2]) == grid.values[1, 0]


def test_coeffs(capsys):
    code, out = run(capsys, "coeffs", "--omega", "1", "--omega", "0.5,2")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["omega"]) for r in rows] == [1.0, 0.5, 2.0]
    assert float(rows[0]["s_abs"]) ** 2 == pytest.approx(0.5)
    assert all(r["unitary"] == "1" for r in rows)


def test_coeffs_perfect_mirror_json(capsys):
    code, out = run(capsys, "coeffs", "--omega", "1", "--lambda0", "1", "--format", "json")
    assert code == 0
    row = json.loads(out)["rows"][0]
    assert row["r_plus"]["abs"] == pytest.approx(1.0, abs=1e-15)
    assert row["s"]["abs"] == 0.0


def test_spectrum_csv(capsys):
    code, out = run(capsys, "spectrum", "--monochromatic", "--n-points", "11", "--chi0", "2")
    assert code == 0
    rows = np.array([[float(x) for x in r] for r in list(csv.reader(io.StringIO(out)))[1:]])
    assert rows.shape == (11, 4)
    np.testing.assert_array_equal(rows[:, 3], rows[::-1, 3])


def test_total(capsys):
    code, out = run(capsys, "total", "--monochromatic", "--lambda0", "1")
    assert code == 0
    data = json.loads(out)
    assert data["totals"]["n_minus"] == 0.0
    assert data["energy_per_particle"] == pytest.approx(0.5)


def test_peak(capsys):
    code, out = run(capsys, "peak")
    assert code == 0
    assert 3.0 <= json.loads(out)["chi0_star"] <= 4.5


def test_sweep_outputs(tmp_path):
    out = tmp_path / "ratio.json"
    code = main(["ratio", "--grid-chi0", "0:10:11", "--grid-lambda0=-1:1:11", "--format", "json",
                 "--out", str(out), "--emit-plot-script"])
    assert code == 0
    names = sorted(os.listdir(tmp_path))
    assert names == ["ratio.csv", "ratio.curves.csv", "ratio.curves.json", "ratio.gp", "ratio.json"]
    curves = json.loads((tmp_path / "ratio.curves.json").read_text())
    assert any(abs(p[1]) < 0.99 for c in curves for p in c["points"])
    assert "ratio.csv" in (tmp_path / "ratio.gp").read_text()


def test_outputs_are_deterministic(tmp_path):
    args = ["sweep", "--grid-chi0", "0:4:5", "--grid-lambda0=-1:1:5", "--levels", "0.3"]
    texts = []
    for k, workers in enumerate((1, 1, 2)):
        path = tmp_path / f"run{k}.csv"
        assert main(args + ["--out", str(path), "--workers", str(workers)]) == 0
        texts.append((path.read_bytes(), (tmp_path / f"run{k}.curves.json").read_bytes()))
    assert texts[0] == texts[1] == texts[2]


@pytest.mark.parametrize(
    "argv, code",
    [
        (["total", "--mu0", "-1"], 2),
        (["total", "--epsilon", "0.5"], 2),
        (["spectrum", "--n-points", "1"], 2),
        (["coeffs"], 2),
        (["sweep", "--grid-chi0", "3:1:5"], 2),
        (["peak", "--chi0-bracket", "5:10"], 3),
        (["coeffs", "--mu0", "0", "--lambda0", "1", "--omega", "0"], 3),
        (["verify", "--rel-tol", "0"], 4),
    ],
)
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["total", "--mu0", "abc"])
    assert info.value.code == 2


def test_verify_passes(capsys):
    code, out = run(capsys, "verify")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 8 and all(line.startswith("[PASS]") for line in lines)


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# mirror\nlambda0 = 1\nmonochromatic = true\nchi0 = 2  # inline\n")
    assert read_config_file(cfg)["chi0"] == 2.0
    _, from_file = run(capsys, "total", "--config", str(cfg))
    assert json.loads(from_file)["params"]["lambda0"] == 1.0
    _, overridden = run(capsys, "total", "--config", str(cfg), "--lambda0", "0.5")
    data = json.loads(overridden)
    assert data["params"]["lambda0"] == 0.5 and data["params"]["chi0"] == 2.0


def test_bad_config(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nonsense = 3\n")
    assert main(["total", "--config", str(cfg)]) == 2
    assert main(["total", "--config", str(tmp_path / "missing.cfg")]) == 2
