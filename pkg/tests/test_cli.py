import csv
import json

import pytest

from tmt.cli import main


def run(tmp_path, *argv):
    return main(["--out-dir", str(tmp_path), *argv])


def test_catalog_necklace_omega(tmp_path, capsys):
    assert run(tmp_path, "catalog", "--necklace", "12:3") == 0
    data = json.loads(capsys.readouterr().out)
    assert data[0]["omega"] == 5
    assert (tmp_path / "tmt-manifest.json").exists()


def test_catalog_melons(tmp_path, capsys):
    assert run(tmp_path, "catalog", "--melons") == 0
    data = json.loads(capsys.readouterr().out)
    assert len(data) == 4 and all(e["omega"] == 3 for e in data)


def test_catalog_tree(tmp_path, capsys):
    assert run(tmp_path, "catalog", "--tree", "2,2") == 0
    data = json.loads(capsys.readouterr().out)
    assert data[0]["omega"] == 5
    assert data[0]["bubble"]["num_white"] == 4


def test_catalog_empty_is_usage_error(tmp_path):
    assert run(tmp_path, "catalog") == 2


def test_verify_restricted_small(tmp_path, capsys):
    code = run(tmp_path, "verify", "--model", "restricted", "--edges", "2",
               "--qmap-graphs", "10", "--out", "census.csv")
    assert code == 0
    out = capsys.readouterr().out
    assert "[pass]" in out and "FAIL" not in out
    with open(tmp_path / "census.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["edges", "labels", "omega", "lo"]
    assert len(rows) > 10


def test_verify_cilia(tmp_path, capsys):
    assert run(tmp_path, "verify", "--model", "full", "--edges", "2", "--cilia", "1") == 0
    assert "bounds" in capsys.readouterr().out


def test_verify_oracle(tmp_path, capsys):
    assert run(tmp_path, "verify", "--oracle", "--max-vertices", "4") == 0
    assert "oracle" in capsys.readouterr().out


def test_sd_catalan_table(tmp_path, capsys):
    pot = tmp_path / "zero.json"
    pot.write_text(json.dumps({"monomials": []}))
    code = run(tmp_path, "sd", "--potential", str(pot), "--formal",
               "--order", "5", "--pmax", "6", "--format", "csv")
    assert code == 0
    rows = [r.split(",") for r in capsys.readouterr().out.strip().splitlines()]
    assert rows[0] == ["p", "monomial", "coefficient"]
    assert ["6", "1", "132"] in rows


def test_sd_numeric_and_reports(tmp_path, capsys):
    pot = tmp_path / "quartic.json"
    pot.write_text(
        json.dumps({"monomials": [{"coeff": "-1/2", "powers": {"2": 1}, "symbol": "g"}]})
    )
    code = run(tmp_path, "sd", "--potential", str(pot), "--gamma", "--gc",
               "--order", "2", "--pmax", "2", "--series-order", "150",
               "--out", "report.json")
    assert code == 0
    data = json.loads((tmp_path / "report.json").read_text())
    assert abs(data["reports"]["gamma"]["gamma"] + 0.5) < 0.12
    assert abs(data["reports"]["gc"]["growth"] - 12) < 0.3


def test_sd_numeric_nonconvergence_exit(tmp_path):
    pot = tmp_path / "super.json"
    pot.write_text(json.dumps({"monomials": [{"coeff": "-1", "powers": {"2": 1}}]}))
    assert run(tmp_path, "sd", "--potential", str(pot), "--numeric", "--pmax", "8") == 1


def test_sd_scan(tmp_path, capsys):
    cfgp = tmp_path / "scan.json"
    cfgp.write_text(json.dumps(
        {"ratio_min": 2.0, "ratio_max": 4.0, "points": 3, "order": 110, "bisect": True}
    ))
    code = run(tmp_path, "sd", "--scan", str(cfgp), "--out", "scan.csv", "--format", "csv")
    assert code == 0
    with open(tmp_path / "scan.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][0] == "ratio" and len(rows) == 4


def test_export_dot(tmp_path):
    assert run(tmp_path, "export-dot", "--bubble", "melon2", "--out", "m.dot") == 0
    text = (tmp_path / "m.dot").read_text()
    assert text.startswith("graph")


def test_usage_error_exit_codes(tmp_path):
    assert run(tmp_path, "sd", "--potential", "missing.json") == 2
    with pytest.raises(SystemExit) as exc:
        main(["not-a-command"])
    assert exc.value.code == 2
