import csv
import io
import json
import shutil
import subprocess
import sys

import pytest

from sosub.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


@pytest.mark.parametrize(
    "kind, f, measure, r, expected",
    [
        ("ub", "x1^2", "gamma:alpha=2,n=1", "0", 0.5),
        ("ubpf", "x1^2+x1^6", "gamma:alpha=2,n=1", "4", 1.67),
        ("ub", "7", "box:-1..1", "2", 7.0),
    ],
)
def test_bound_examples(capsys, kind, f, measure, r, expected):
    code, out, _ = run(capsys, "bound", "--kind", kind, "--f", f, "--measure", measure, "--r", r, "--precision-bits", "256")
    assert code == 0
    header, row = rows(out)
    assert header == ["kind", "f", "measure", "r", "value", "precision_bits", "eig_residual"]
    assert row[0] == kind and row[2] == measure and row[3] == r and row[5] == "256"
    assert round(float(row[4]), 2) == expected


def test_bound_no_header_and_env_precision(capsys, monkeypatch):
    monkeypatch.setenv("SOSUB_PRECISION_BITS", "128")
    code, out, _ = run(capsys, "bound", "--f", "x1^2", "--measure", "gamma:alpha=2", "--r", "1", "--no-header")
    assert code == 0
    (row,) = rows(out)
    assert row[5] == "128"


@pytest.mark.parametrize(
    "args",
    [
        ["--f", "x1^^2", "--measure", "gamma:alpha=2", "--r", "1"],
        ["--f", "x1^2", "--measure", "gamma:alpha=-2", "--r", "1"],
        ["--f", "x1^2", "--measure", "disk:1", "--r", "1"],
        ["--f", "x3", "--measure", "gamma:alpha=2,n=2", "--r", "1"],
        ["--f", "x1^2", "--measure", "gamma:alpha=2", "--r", "-1"],
    ],
)
def test_bound_parse_errors_exit_2(capsys, args):
    code, out, err = run(capsys, "bound", *args)
    assert code == 2 and out == "" and err.startswith("error:")


def test_bound_solver_error_exit_3(capsys):
    code, _, err = run(capsys, "bound", "--kind", "ubpf", "--f", "x1^2+x1^6", "--measure", "gamma:alpha=2", "--r", "40")
    assert code == 3 and "solver error" in err


def test_bad_precision_exit_2(capsys):
    code, _, err = run(capsys, "bound", "--f", "x1", "--measure", "box:0..1", "--r", "1", "--precision-bits", "16")
    assert code == 2


def test_missing_config_file_exit_2(capsys, tmp_path):
    code, _, _ = run(capsys, "compact-rate", "--config", str(tmp_path / "none.json"))
    assert code == 2


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"precision_bits": 96, "r_max": 4}))
    code, out, _ = run(capsys, "bound", "--f", "x1", "--measure", "box:-1..1", "--r", "2", "--config", str(cfg))
    assert rows(out)[1][5] == "96"
    code, out, _ = run(
        capsys, "bound", "--f", "x1", "--measure", "box:-1..1", "--r", "2", "--config", str(cfg), "--precision-bits", "160"
    )
    assert rows(out)[1][5] == "160"


def test_nonconv_lsl(capsys, tmp_path):
    code, out, _ = run(capsys, "nonconv-lsl", "--r-max", "3", "--precision-bits", "256", "--out-dir", str(tmp_path))
    assert code == 0
    table = rows(out)
    assert table[0] == ["r", "ub_lsl", "ub_control", "rel_decrease", "plateau", "ratio"]
    assert [row[0] for row in table[1:]] == ["1", "2", "3"]
    assert (tmp_path / "nonconv_lsl_alpha0p5.csv").exists() and (tmp_path / "nonconv_lsl_alpha0p5.svg").exists()


def test_nonconv_pf_with_override(capsys, tmp_path):
    code, out, _ = run(
        capsys, "nonconv-pf", "--g", "x1^6", "--r-min", "2", "--r-max", "2", "--precision-bits", "256", "--out-dir", str(tmp_path)
    )
    assert code == 0
    (_, row) = rows(out)
    assert row[0] == "2" and row[4] == "True"
    assert list(tmp_path.glob("nonconv_pf_alpha2_x16*.csv"))


def test_density_compare(capsys, tmp_path):
    code, out, _ = run(capsys, "density-compare", "--grid-points", "50", "--out-dir", str(tmp_path), "--format", "csv")
    assert code == 0
    header, row = rows(out)
    assert header[0] == "c1" and float(row[0]) > 0 and float(row[2]) > 0 and row[4] == "True"
    assert not list(tmp_path.glob("*.svg"))


def test_density_compare_rejects_d(capsys):
    code, _, _ = run(capsys, "density-compare", "--d", "1", "--grid-points", "10")
    assert code == 2


def test_deriv_ratio(capsys):
    code, out, _ = run(capsys, "deriv-ratio", "--r-max", "2", "--precision-bits", "128")
    assert code == 0
    table = rows(out)
    assert [row[0] for row in table[1:]] == ["0", "1", "2"]
    assert float(table[1][2]) == 0


def test_compact_rate(capsys):
    code, out, _ = run(capsys, "compact-rate", "--r-max", "6", "--precision-bits", "128")
    assert code == 0
    assert out.strip().splitlines()[-1].startswith("# ub_slope=")


def test_table1_help(capsys):
    with pytest.raises(SystemExit) as info:
        main(["table1", "--help"])
    assert info.value.code == 0
    assert "--precision-bits" in capsys.readouterr().out


def test_unknown_subcommand(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "sosub.cli", "bound", "--f", "x1^2", "--measure", "gamma:alpha=2", "--r", "0", "--precision-bits", "128"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert rows(proc.stdout)[1][4].startswith("0.5")


@pytest.mark.skipif(shutil.which("sosub") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["sosub", "bound", "--f", "7", "--measure", "box:-1..1", "--r", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and rows(proc.stdout)[1][4].startswith("7")
