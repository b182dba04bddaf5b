import csv
import io
import re
import subprocess
import sys

import numpy as np
import pytest

from cornellqes import cli

SCI = re.compile(r"^-?\d\.\d{8}e[+-]\d{2}$|^nan$")


def run(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows_of(text):
    return list(csv.reader(io.StringIO(text)))


def test_mass_table_default(capsys):
    code, out, _ = run(["mass-table"], capsys)
    assert code == 0
    rows = rows_of(out)
    assert rows[0] == ["species", "n", "m", "B", "nu", "g", "E", "M"]
    assert len(rows) == 10
    first = rows[1]
    assert first[:3] == ["charmonium", "1", "1"]
    assert float(first[5]) == pytest.approx(3.068357313, rel=1e-8)
    assert float(first[7]) == pytest.approx(20.935573, rel=1e-7)
    assert [r[0] for r in rows[1:]] == ["charmonium"] * 6 + ["bottomonium"] * 3
    for r in rows[1:]:
        assert all(SCI.match(v) for v in r[3:])


def test_mass_table_species_and_check(capsys):
    code, out, _ = run(["mass-table", "--species", "bottomonium", "--check"], capsys)
    assert code == 0 and len(rows_of(out)) == 4
    code, _, err = run(["mass-table", "--species", "toponium"], capsys)
    assert code == 2 and "toponium" in err


def test_scan_a_increasing(capsys):
    code, out, _ = run(["scan", "--axis", "a", "--range", "0.1:2:50"], capsys)
    assert code == 0
    rows = rows_of(out)
    assert rows[0] == ["x", "E"] and len(rows) == 51
    E = np.array([float(r[1]) for r in rows[1:]])
    assert np.all(np.diff(E) > 0)


def test_scan_check_affine(capsys):
    assert run(["scan", "--axis", "nu", "--m", "1", "--range", "0:3:7", "--check-affine"], capsys)[0] == 0
    assert run(["scan", "--axis", "B", "--range", "0:3:7", "--check-affine"], capsys)[0] == 1


def test_invalid_axis_writes_nothing(tmp_path, capsys):
    out = tmp_path / "x.csv"
    assert run(["scan", "--axis", "q", "--range", "0:1:3", "--out", str(out)], capsys)[0] == 2
    assert not out.exists()


@pytest.mark.parametrize("rng", ["1:0:5", "0:1:1", "0:1", "a:b:c"])
def test_bad_ranges(rng, capsys):
    assert run(["scan", "--axis", "a", "--range", rng], capsys)[0] == 2


def test_thermo_exact_ladder(capsys):
    code, out, _ = run(["thermo", "--method", "exact", "--theta", "1", "--xi", "1", "--T", "1"], capsys)
    assert code == 0
    rows = rows_of(out)
    assert rows[0] == ["T", "G", "U", "Cv", "F", "S", "I", "M", "method"]
    assert abs(float(rows[1][1])) == pytest.approx(0.38644, abs=5e-5)


def test_thermo_all_three_rows_per_T(capsys):
    code, out, _ = run(["thermo", "--method", "all", "--T-range", "0.5:1.5:3"], capsys)
    assert code == 0
    methods = [r[-1] for r in rows_of(out)[1:]]
    assert methods == ["exact", "closed", "limit"] * 3


def test_thermo_nonconvergent_row_is_nan(capsys):
    code, out, err = run(["thermo", "--method", "exact", "--theta", "1", "--xi", "-3", "--T", "1"], capsys)
    assert code == 0
    assert rows_of(out)[1][1] == "nan" and "WARNING" in err


def test_thermo_input_errors(capsys):
    assert run(["thermo", "--T", "-1"], capsys)[0] == 2
    assert run(["thermo"], capsys)[0] == 2
    assert run(["thermo", "--theta", "1", "--T", "1"], capsys)[0] == 2


def test_energy_and_flags(capsys):
    code, out, _ = run(["energy", "--n", "2", "--m", "1", "--level", "termination"], capsys)
    assert code == 0 and rows_of(out)[0] == ["n", "m", "E", "M"]
    assert run(["energy", "--mu", "-1"], capsys)[0] == 2
    assert run(["energy", "--n", "0"], capsys)[0] == 2
    assert run(["energy", "--mu", "nan"], capsys)[0] == 2


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nmu = 0.74\nmu = 0.8   # later wins\nB = 1.5\n", encoding="utf-8")
    code, out, err = run(["energy", "--config", str(cfg)], capsys)
    assert code == 0 and "duplicate key 'mu'" in err
    code2, out2, _ = run(["energy", "--mu", "0.8", "--B", "1.5"], capsys)
    assert out == out2
    # flags override the file
    code3, out3, _ = run(["energy", "--config", str(cfg), "--mu", "0.74"], capsys)
    assert out3 != out


@pytest.mark.parametrize(
    "body,needle",
    [("mu = -1\n", "mu must be > 0"), ("mu 3\n", ":1:"), ("\nfoo = 1\n", ":2:"), ("n = 1.5\n", ":1:")],
)
def test_config_errors(tmp_path, capsys, body, needle):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(body, encoding="utf-8")
    code, _, err = run(["energy", "--config", str(cfg)], capsys)
    assert code == 2 and needle in err


def test_parse_config_direct(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("quark-mass = 1.5\naxis = nu\n", encoding="utf-8")
    assert cli.parse_config(str(cfg)) == {"quark_mass": 1.5, "axis": "nu"}


def test_deterministic_output(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert run(["scan", "--axis", "B", "--range", "0:4:9", "--out", str(p)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r" not in a.read_bytes()


def test_validate_text_and_csv(tmp_path, capsys):
    out = tmp_path / "audit.csv"
    code, text, _ = run(["validate", "--out", str(out)], capsys)
    assert code == 0
    assert "rigorous" in text and "level-spacing-ratio" in text
    header = out.read_text().splitlines()[0]
    assert header == "key,printed,reference,abs_diff,rel_diff,description"


def test_fmt():
    assert cli.fmt(1.0) == "1.00000000e+00"
    assert cli.fmt(-123456789.123) == "-1.23456789e+08"
    assert cli.fmt(float("nan")) == "nan"
    assert cli.fmt(3) == "3"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cornellqes", "mass-table", "--species", "charmonium"], capture_output=True, text=True)
    assert res.returncode == 0 and len(res.stdout.splitlines()) == 7
