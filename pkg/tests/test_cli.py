import json
import subprocess
import sys

import pytest

from weaklg.catalog import find_entry, save_model_file
from weaklg.cli import main
from weaklg.periods import PowerSeries, constant_terms_series
from weaklg.pfops import DiffOperator


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_series_text(capsys):
    code, out, _ = run(capsys, "series", "p3_a", "-n", "9")
    assert code == 0
    assert out.strip() == "1, 0, 0, 0, 24, 0, 0, 0, 2520"
    code, out, _ = run(capsys, "series", "x22_nontoric", "-n", "5")
    assert (code, out.strip()) == (0, "1, 0, 8, 0, 216")
    code, out, _ = run(capsys, "series", "p3_a", "-n", "1")
    assert (code, out.strip()) == (0, "1")


def test_series_json_round_trips(capsys):
    code, out, _ = run(capsys, "series", "q3_d", "-n", "12", "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["id"] == "q3_d"
    restored = PowerSeries.from_obj(obj["series"])
    assert restored == constant_terms_series(find_entry("q3_d").polynomial, 12)


def test_pf_text_and_shared_operator(capsys):
    code, out, _ = run(capsys, "pf", "p3_a")
    assert code == 0
    assert out.splitlines()[0] == "D^3 + t^4*(-1536 - 2816*D - 1536*D^2 - 256*D^3)"
    assert "held-out" in out
    _, out_a, _ = run(capsys, "pf", "q3_a", "-n", "40")
    _, out_b, _ = run(capsys, "pf", "q3_b", "-n", "40")
    assert out_a.splitlines()[0] == out_b.splitlines()[0]


def test_pf_json_round_trips(capsys):
    code, out, _ = run(capsys, "pf", "x22_b", "--json")
    assert code == 0
    op = DiffOperator.from_obj(json.loads(out)["operator"])
    assert (op.ord_D, op.deg_t) == (3, 2)


def test_pf_insufficient_series_is_not_usage_error(capsys):
    code, _, err = run(capsys, "pf", "p3_a", "-n", "5")
    assert code == 1
    assert "5" in err


def test_polytope_json(capsys):
    code, out, _ = run(capsys, "polytope", "p3_a", "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["volume"] == "32/3"
    assert obj["interior_lattice_points"] == [[0, 0, 0]]
    assert obj["canonical"] is True
    assert obj["toric"]["ok"] is True
    assert obj["toric"]["rows"][0] == {
        "m": 1,
        "count": 35,
        "predicted": "35",
        "ok": True,
    }
    assert obj["picard_rank"] == 1


def test_polytope_nontoric_flag(capsys):
    code, out, _ = run(capsys, "polytope", "x22_nontoric", "--json")
    assert code == 0
    assert json.loads(out)["toric"]["ok"] is False


def test_critical_json(capsys):
    code, out, _ = run(capsys, "critical", "p3_a", "--starts", "128", "--json")
    assert code == 0
    obj = json.loads(out)
    assert len(obj["clusters"]) == 4
    assert obj["expected"]["match"] is True
    assert obj["expected"]["missing"] == []


def test_compare(capsys):
    code, out, _ = run(capsys, "compare", "p3_a", "p3_b", "-n", "24")
    assert (code, out.strip()) == (0, "equal (24 coefficients)")
    code, out, _ = run(capsys, "compare", "p3_a", "p3_a", "-n", "8")
    assert code == 0
    code, out, _ = run(capsys, "compare", "p3_a", "q3_a", "-n", "24", "--json")
    assert code == 1
    obj = json.loads(out)
    assert obj["equal"] is False
    assert obj["mismatch_index"] <= 8


def test_verify_single_model(capsys):
    code, out, _ = run(capsys, "verify", "p3_a", "--starts", "64", "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["overall"] == "pass"
    report = obj["reports"][0]
    names = [c["name"] for c in report["checks"]]
    assert names == [
        "series-oracle",
        "toric",
        "canonical",
        "pf-recovery",
        "pf-shape",
        "critical-values",
        "cross-model-series-equality",
    ]
    assert all(c["status"] in ("pass", "skipped") for c in report["checks"])


def test_verify_skips_inapplicable_checks(capsys):
    code, out, _ = run(capsys, "verify", "v18", "--starts", "8", "--json")
    assert code == 0
    by_name = {c["name"]: c["status"] for c in json.loads(out)["reports"][0]["checks"]}
    assert by_name["critical-values"] == "skipped"
    assert by_name["cross-model-series-equality"] == "skipped"
    assert by_name["canonical"] == "skipped"
    assert by_name["toric"] == "pass"


def test_usage_errors(capsys):
    assert run(capsys, "series", "no_such_id")[0] == 2
    assert run(capsys, "verify", "no_such_id")[0] == 2
    assert run(capsys, "series")[0] == 2
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "verify", "p3_a", "--all")[0] == 2
    assert run(capsys, "series", "p3_a", "-n", "0")[0] == 2
    assert run(capsys, "critical", "p3_a", "--starts", "0")[0] == 2


def test_model_file_resolution(tmp_path, capsys):
    path = tmp_path / "model.json"
    save_model_file(find_entry("p3_a"), path)
    code, out, _ = run(capsys, "series", "--file", str(path), "-n", "5")
    assert (code, out.strip()) == (0, "1, 0, 0, 0, 24")
    code, out2, _ = run(capsys, "series", str(path), "-n", "5")
    assert (code, out2) == (0, out)
    assert run(capsys, "series", "p3_a", "--file", str(path))[0] == 2


def test_malformed_model_file(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("not json at all")
    assert run(capsys, "series", "--file", str(path))[0] == 2
    path.write_text(json.dumps({"id": "x"}))
    assert run(capsys, "series", "--file", str(path))[0] == 2


def test_json_byte_determinism(capsys):
    argv = ["critical", "q3_b", "--starts", "96", "--json"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second


def test_console_script_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "weaklg.cli", "series", "p3_a", "-n", "5"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert out.stdout.strip() == "1, 0, 0, 0, 24"
    usage = subprocess.run(
        [sys.executable, "-m", "weaklg.cli", "frobnicate"], capture_output=True
    )
    assert usage.returncode == 2


def test_unknown_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["definitely-not-a-command"])
    capsys.readouterr()
    assert exc.value.code == 2
