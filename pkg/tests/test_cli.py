import csv
import io
import json
import subprocess
import sys

import pytest

from hdccic.cli import run


def _call(capsys, *argv):
    status = run(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def test_gdof_json(capsys):
    status, out, _ = _call(capsys, "gdof", "--topology", "sym", "--alpha", "0.55", "--beta", "2")
    doc = json.loads(out)
    assert status == 0
    assert doc["d"] == pytest.approx(0.666667, abs=1e-6)
    assert doc["gamma_star"] == pytest.approx(0.259259, abs=1e-6)
    assert {"d_nocoop", "d_ideal", "active_branch", "cooperation"} <= set(doc)


@pytest.mark.parametrize(
    "argv",
    [
        ["gdof", "--topology", "sym", "--alpha", "-1", "--beta", "1"],
        ["gdof", "--alpha", "1"],
        ["bounds", "--alpha", "1", "--beta", "1"],
        ["gap-sweep", "--alpha", "1", "--beta", "1", "--snr-range", "10:0:1"],
        ["gdof", "--topology", "q", "--alpha", "1", "--beta", "1"],
        ["bounds", "--alpha", "1", "--beta", "1", "--snr-db", "10", "--gamma", "2"],
    ],
)
def test_flag_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        status = run(argv)
        raise SystemExit(status)
    assert exc.value.code == 2


def test_regime_and_bounds(capsys):
    status, out, _ = _call(capsys, "regime", "--alpha", "0.55", "--beta", "2", "--snr-db", "60")
    doc = json.loads(out)
    assert doc["index"] == 8 and doc["gains_regime_index"] == 8
    status, out, _ = _call(capsys, "bounds", "--alpha", "1", "--beta", "1", "--snr-db", "0", "--gamma", "0")
    doc = json.loads(out)
    assert doc["cs_bits"] == pytest.approx(4.507)
    assert doc["gamma"] == 0


def test_inner(capsys):
    status, out, _ = _call(capsys, "inner", "--topology", "z", "--alpha", "3", "--beta", "4", "--snr-db", "60")
    doc = json.loads(out)
    assert doc["scheme_id"] == "sym_region3"
    assert doc["sum_bits"] == pytest.approx(sum(doc["component_rates"].values()))


def test_gap_sweep_csv(capsys):
    status, out, _ = _call(capsys, "gap-sweep", "--alpha", "3", "--beta", "4", "--snr-range", "20:40:10")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["snr_db", "ob_bits", "ib_bits", "gap_bits", "regime", "scheme"]
    assert len(rows) == 4


def test_region_map_csv(capsys):
    status, out, _ = _call(capsys, "region-map", "--topology", "z", "--alpha-range", "0:1:0.5", "--beta-range", "0:1:0.5")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["alpha", "beta", "region", "d", "d_nocoop", "d_ideal", "coop"]
    assert len(rows) == 10


def test_lda_verify(capsys):
    status, out, _ = _call(capsys, "lda-verify", "--seed", "7")
    assert status == 0
    assert out.count("PASS") == 6


def test_audit_small(capsys):
    status, out, _ = _call(
        capsys, "audit", "--topology", "z", "--alpha-range", "0:4:1", "--beta-range", "0:6:2", "--snr-range", "10:50:20"
    )
    assert status == 0
    assert "worst gap <= 4.507" in out


def test_out_file(tmp_path, capsys):
    path = tmp_path / "g.json"
    status, out, _ = _call(capsys, "gdof", "--alpha", "3", "--beta", "4", "--out", str(path))
    assert out == "" and json.loads(path.read_text())["d"] == 1.25


def test_deterministic_output(capsys):
    argv = ["gap-sweep", "--alpha", "0.25", "--beta", "2", "--snr-range", "10:30:10", "--seed", "3"]
    first = _call(capsys, *argv)[1]
    assert _call(capsys, *argv)[1] == first


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "hdccic", "gdof", "--alpha", "3", "--beta", "4"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(res.stdout)["d"] == 1.25
