import json

import pytest

from ecacomm import __version__
from ecacomm.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def test_classify_lists_88_classes(capsys):
    rc, out, _ = run(capsys, "classify")
    assert rc == 0
    assert out.strip().splitlines()[-1] == "88 classes, 256 rules total"


def test_preimage_orphan_word(capsys):
    rc, out, _ = run(capsys, "preimage", "--rule", "76", "--word", "111")
    assert rc == 0
    assert out.strip() == "no antecedent"


def test_preimage_lists_witnesses(capsys):
    rc, out, _ = run(capsys, "preimage", "--rule", "204", "--word", "11",
                     "--all", "--json")
    doc = json.loads(out)
    assert rc == 0
    assert doc["results"]["has_antecedent"] is True
    assert doc["results"]["witness"] in doc["results"]["preimages"]


def test_evolve_rule0_goes_blank(capsys):
    rc, out, _ = run(capsys, "evolve", "--rule", "0", "--width", "9",
                     "--steps", "3", "--json")
    doc = json.loads(out)
    assert rc == 0
    rows = doc["results"]["rows"]
    assert len(rows) == 4
    assert all(set(r) == {"0"} for r in rows[1:])


def test_evolve_reporting_is_idempotent(capsys):
    args = ("evolve", "--rule", "110", "--width", "12", "--steps", "4",
            "--seed", "9", "--json")
    rc1, out1, _ = run(capsys, *args)
    rc2, out2, _ = run(capsys, *args)
    doc1, doc2 = json.loads(out1), json.loads(out2)
    assert rc1 == rc2 == 0
    assert doc1["results"] == doc2["results"]
    # Re-running from the recorded parameters reproduces the results.
    rc3, out3, _ = run(capsys, "evolve", "--rule",
                       str(doc1["parameters"]["rule"]), "--word",
                       doc1["parameters"]["word"], "--steps",
                       str(doc1["parameters"]["steps"]), "--json")
    assert json.loads(out3)["results"] == doc1["results"]


def test_evolve_writes_report_directory(capsys, tmp_path):
    d = tmp_path / "rep"
    rc, out, _ = run(capsys, "evolve", "--rule", "90", "--word",
                     "000010000", "--steps", "4", "--report-dir", str(d))
    assert rc == 0
    names = {p.name for p in d.iterdir()}
    assert names == {"report.json", "diagram.pbm", "diagram.png", "rows.csv"}
    doc = json.loads((d / "report.json").read_text())
    assert doc["command"] == "evolve" and doc["version"] == __version__
    assert (d / "diagram.pbm").read_bytes().startswith(b"P1\n9 5\n")
    assert (d / "rows.csv").read_text().startswith("step,width,cells")


def test_evolve_writes_binary_pbm(capsys, tmp_path):
    out_file = tmp_path / "d.pbm"
    rc, _, _ = run(capsys, "evolve", "--rule", "30", "--word", "0" * 15,
                   "--steps", "3", "--format", "p4", "--out", str(out_file))
    assert rc == 0
    assert out_file.read_bytes().startswith(b"P4\n15 4\n")


def test_evolve_requires_an_initial_condition(capsys):
    rc, _, err = run(capsys, "evolve", "--rule", "30", "--steps", "3")
    assert rc == 2
    assert "word" in err


def test_pred_reports_per_cut_depths(capsys):
    rc, out, _ = run(capsys, "pred", "--rule", "204", "--n", "2", "--json")
    doc = json.loads(out)
    assert rc == 0
    assert doc["results"]["max"] == 1
    assert set(doc["results"]["per_cut"]) == {str(c) for c in range(5)}


def test_cc_on_a_table_file(capsys, tmp_path):
    table = tmp_path / "xor.txt"
    table.write_text("01\n10\n")
    rc, out, _ = run(capsys, "cc", "--table", str(table))
    assert rc == 0
    assert out.strip() == "depth 2"


def test_cc_usage_conflict(capsys, tmp_path):
    table = tmp_path / "t.txt"
    table.write_text("01\n")
    rc, _, err = run(capsys, "cc", "--table", str(table), "--rule", "90",
                     "--n", "1")
    assert rc == 2 and "exactly one" in err


def test_cc_guard_maps_to_exit_3(capsys):
    rc, _, err = run(capsys, "cc", "--rule", "110", "--n", "12")
    assert rc == 3
    assert "guard exceeded" in err


def test_sinv_verdict(capsys):
    rc, out, _ = run(capsys, "sinv", "--rule", "13", "--u", "0",
                     "--x", "1", "--json")
    doc = json.loads(out)
    assert rc == 0
    assert doc["results"]["verdict"] == "invaded"
    assert doc["results"]["time"] is not None


def test_protocols_single_rule(capsys):
    rc, out, _ = run(capsys, "protocols", "--rule", "184", "--problem",
                     "pred", "--n-max", "3")
    assert rc == 0
    assert "rule 184" in out and " ok" in out
    assert out.strip().splitlines()[-1] == "1 audits, 0 failing"


def test_protocols_report_dir(capsys, tmp_path):
    d = tmp_path / "aud"
    rc, _, _ = run(capsys, "protocols", "--rule", "172", "--problem",
                   "sinv", "--n-max", "3", "--report-dir", str(d))
    assert rc == 0
    assert {p.name for p in d.iterdir()} == \
        {"report.json", "audits.csv", "bits.png"}


def _claim_line(**kw):
    return json.dumps(kw)


def test_verify_custom_catalog_pass_and_fail(capsys, tmp_path):
    good = tmp_path / "good.jsonl"
    good.write_text(_claim_line(id="g", rule=90, prop="linear-rules",
                                kind="affine_rule", params={}) + "\n")
    rc, out, _ = run(capsys, "verify", "--catalog", str(good))
    assert rc == 0 and "[pass] g" in out

    bad = tmp_path / "bad.jsonl"
    bad.write_text(_claim_line(id="b", rule=110, prop="linear-rules",
                               kind="affine_rule", params={}) + "\n")
    rc, out, _ = run(capsys, "verify", "--catalog", str(bad))
    assert rc == 1 and "UNEXPECTED-FAIL" in out


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    out, _ = capsys.readouterr()
    assert __version__ in out


def test_unknown_subcommand_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
