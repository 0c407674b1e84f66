import json
from pathlib import Path

import pytest

from mockchar import cli
from mockchar.errors import InconsistentSystem
from mockchar.golden import load_h_reference, load_table
from mockchar.series import QSeries

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_expand_text(capsys):
    code, out, _ = run(capsys, "expand", "--object", "psi:2:1", "--order", "2", "--no-cache")
    assert code == 0
    assert out == "q^(1/8) - 3*q^(9/8) + O(q^2)\n"


def test_expand_character(capsys):
    code, out, _ = run(capsys, "expand", "--object", "ch:Rt:1:1/4:0", "--order", "3", "--no-cache")
    assert code == 0
    assert out.startswith("1 + (u^-4 - 2*u^-2 + 2 - 2*u^2 + u^4)*q + ")


def test_expand_json_round_trips(capsys):
    code, out, _ = run(capsys, "expand", "--object", "eta3", "--order", "5/2", "--format", "json", "--no-cache")
    assert code == 0
    s = QSeries.from_json(out)
    assert s == cli.resolve("eta3", s.trunc_order)


def test_expand_csv(capsys):
    _, out, _ = run(capsys, "expand", "--object", "theta00", "--order", "2", "--format", "csv", "--no-cache")
    rows = out.splitlines()
    assert rows[0] == "q_exp,u_pow,coeff"
    assert "0,0,1" in rows


def test_unknown_object_exit_2(capsys):
    code, out, err = run(capsys, "expand", "--object", "bogus", "--no-cache")
    assert code == 2 and out == ""
    assert "unknown object 'bogus'" in err


def test_bad_field_exit_2(capsys):
    code, _, _ = run(capsys, "expand", "--object", "psi:x:1", "--no-cache")
    assert code == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["expand", "--object", "eta3", "--order", "-1"])
    assert exc.value.code == 2


def test_cache_hit_equals_fresh(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("MOCKCHAR_CACHE", str(tmp_path))
    _, first, _ = run(capsys, "expand", "--object", "genus:k3", "--order", "3", "--format", "json")
    files = list(tmp_path.glob("*.json"))
    assert len(files) == 1
    _, second, _ = run(capsys, "expand", "--object", "genus:k3", "--order", "3", "--format", "json")
    _, fresh, _ = run(capsys, "expand", "--object", "genus:k3", "--order", "3", "--format", "json", "--no-cache")
    assert first == second == fresh


def test_cache_dir_flag_wins(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("MOCKCHAR_CACHE", str(tmp_path / "env"))
    run(capsys, "expand", "--object", "eta3", "--order", "2", "--cache-dir", str(tmp_path / "flag"))
    assert list((tmp_path / "flag").glob("*.json"))
    assert not (tmp_path / "env").exists()


def test_cache_key_depends_on_order():
    assert cli.cache_key("eta3", 2) != cli.cache_key("eta3", 3)
    assert cli.cache_key("eta3", 2) == cli.cache_key("eta3", 2)


def test_decompose_k3_json(capsys):
    code, out, _ = run(capsys, "decompose", "--genus", "k3", "--order", "4")
    assert code == 0
    d = json.loads(out)
    assert [m["raw_mult"] for m in d["massless"]] == ["20", "-2"]
    assert d["massive"][0]["coeffs"] == ["90", "462", "1540", "4554"]


def test_decompose_is_deterministic(capsys):
    outs = {run(capsys, "decompose", "--genus", "x2", "--n", "15", "--format", "text")[1] for _ in range(2)}
    assert len(outs) == 1
    assert outs.pop().startswith("genus x2:15  k=2  euler=324")


def test_decompose_missing_argument(capsys):
    code, _, err = run(capsys, "decompose", "--genus", "sym")
    assert code == 2 and "--k" in err


def test_decompose_needs_normalization(capsys):
    code, _, _ = run(capsys, "decompose", "--genus", "mixed", "--k2", "2", "--k3", "1", "--k4", "1")
    assert code == 2
    code, _, _ = run(capsys, "decompose", "--genus", "mixed", "--k2", "2", "--k3", "1", "--k4", "1",
                     "--normalization", "8", "--order", "2")
    assert code == 0


def test_inconsistent_system_exit_3(capsys, monkeypatch):
    def broken(*_a, **_k):
        raise InconsistentSystem("residual nonzero at q^1")

    monkeypatch.setattr(cli, "decompose_genus", broken)
    code, _, err = run(capsys, "decompose", "--genus", "k3")
    assert code == 3 and "residual nonzero" in err


def test_tables_match_golden_bytes(capsys):
    for table, fname in (("gamma", "gamma.csv"), ("ns", "gamma_ns.csv")):
        code, out, _ = run(capsys, "tables", "--kmax", "10", "--table", table)
        assert code == 0
        assert out.encode() == (GOLDEN / fname).read_bytes()


def test_tables_range_checked(capsys):
    code, _, _ = run(capsys, "tables", "--kmax", "13")
    assert code == 2


def test_packaged_data_matches_golden():
    assert load_table("gamma") == (GOLDEN / "gamma.csv").read_text()
    assert load_table("gamma_ns") == (GOLDEN / "gamma_ns.csv").read_text()
    assert load_h_reference() == json.loads((GOLDEN / "h_reference.json").read_text())


def test_verify_numeric_passes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "numeric", "--tau", "0.2+0.9i")
    assert code == 0
    assert out.rstrip().endswith(f"{len(cli.numeric_checks(complex(0.2, 0.9)))} checks passed")


def test_verify_numeric_json(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "numeric", "--tau", "0+1i", "--format", "json")
    assert code == 0
    assert all(c["pass"] for c in json.loads(out))


def test_verify_symbolic_reports_reference_mismatches(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "symbolic")
    assert code == 1
    fails = [ln for ln in out.splitlines() if ln.startswith("FAIL")]
    assert len(fails) == 1 and "h_reference" in fails[0]
    assert "182/200" in fails[0]
