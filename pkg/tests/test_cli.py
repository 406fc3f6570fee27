import json
import os

from sl2tate.cli import main

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "src", "sl2tate",
                        "fixtures")


def _run_json(tmp_path, argv):
    out = tmp_path / "report.json"
    code = main(argv + ["--out", str(out)])
    data = json.loads(out.read_text()) if out.exists() else None
    return code, data, out


def test_analyze_rational_ell3(tmp_path):
    code, rep, out = _run_json(tmp_path, [
        "analyze", "--field", "0,1", "--ell", "3"])
    assert code == 0
    assert rep["setup"] == {"case": "Field", "regularity": "R1", "vcd": 1,
                            "t": ["-1"],
                            "notes": rep["setup"]["notes"]}
    assert rep["classes"]["element_class_count"] == 2
    assert rep["classes"]["subgroup_class_count"] == 1
    assert all(v == 1 for v in rep["cohomology"]["total"]["table"].values())
    assert len(rep["cohomology"]["total"]["table"]) == 17
    assert rep["quillen"]["rank_over_c2"] == 4
    # round trip is byte-identical
    first = out.read_text()
    main(["analyze", "--field", "0,1", "--ell", "3", "--out", str(out)])
    assert out.read_text() == first


def test_analyze_no_torsion(tmp_path):
    code, rep, _ = _run_json(tmp_path, [
        "analyze", "--field", "0,1", "--ell", "5"])
    assert code == 0
    assert rep["setup"]["case"] == "NoTorsion"
    assert all(v == 0 for v in rep["cohomology"]["total"]["table"].values())
    assert rep["quillen"]["rank_over_c2"] == 0


def test_analyze_regularity_violation_exit_code(tmp_path):
    code = main(["analyze", "--field=-3,0,1", "--ell", "3",
                 "--out", str(tmp_path / "r.json")])
    assert code == 2


def test_analyze_missing_backend_exit_code(tmp_path):
    # degree-22 field without fixtures
    poly = ",".join(["1"] * 23)
    code = main(["analyze", "--field", poly, "--places", "23", "--ell", "23",
                 "--out", str(tmp_path / "r.json")])
    assert code == 3


def test_analyze_q23_with_fixture(tmp_path):
    code, rep, _ = _run_json(tmp_path, [
        "analyze", "--field", ",".join(["1"] * 23), "--places", "23",
        "--ell", "23", "--fixtures", os.path.join(FIXTURES, "q23.json")])
    assert code == 0
    assert rep["setup"]["case"] == "Split"
    assert rep["classes"]["subgroup_class_count"] == 2
    assert rep["quillen"]["rank_over_c2"] == 12288
    assert rep["detection"]["verdict"] == "NotInjective"
    assert rep["norm_maps"]["provenance"]["unit_K"] == "ingested:literature"


def test_restrict_scenario(tmp_path):
    code, rep, _ = _run_json(tmp_path, [
        "restrict", "--scenario", os.path.join(FIXTURES, "q23_hilbert.json"),
        "--fixtures", os.path.join(FIXTURES, "q23.json")])
    assert code == 0
    assert rep["restriction"]["degree"] == 3
    assert rep["restriction"]["conditional"]
    assert rep["transfer_obstruction"]["merge_size"] == 3


def test_restrict_identity(tmp_path):
    code, rep, _ = _run_json(tmp_path, [
        "restrict", "--field", "0,1", "--ell", "3",
        "--target-field", "0,1", "--embedding", "0"])
    assert code == 0
    assert rep["restriction"]["merges"] == []
    assert rep["transfer_obstruction"] is None


def test_oracle_check_small(tmp_path):
    code, rep, _ = _run_json(tmp_path, [
        "oracle-check", "--forms-bound", "30"])
    assert code == 0
    assert rep["all_pass"]
    assert any(r["check"].startswith("forms") for r in rep["oracle_checks"])


def test_oracle_check_injected_fault(tmp_path):
    code, rep, _ = _run_json(tmp_path, [
        "oracle-check", "--forms-bound", "4", "--inject-fault"])
    assert code == 1
    assert not rep["all_pass"]
