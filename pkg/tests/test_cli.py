import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from ising_svoa.cache import SCHEMA_VERSION, CacheEntry, CacheMismatch, OperatorCache, cache_key, compute_matrix
from ising_svoa.cli import Config, render, run
from ising_svoa.fock import Sector, Vector
from ising_svoa.zhu import OMEGA, X

NS, R = Sector.NS, Sector.R


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue()


def test_dims_rows():
    code, text = call("dims", "--sector", "ns", "--max-weight", "4")
    assert code == 0
    rows = [(r["weight"], r["dim"]) for r in json.loads(text)["rows"]]
    assert rows == [("0", 1), ("1/2", 1), ("1", 0), ("3/2", 1), ("2", 1), ("5/2", 1), ("3", 1), ("7/2", 1), ("4", 2)]


def test_dims_csv_and_basis():
    code, text = call("dims", "--space", "[1/16]+", "--max-weight", "3", "--format", "csv")
    assert code == 0
    assert text.splitlines()[:3] == ["space,weight,dim", "[1/16]+,1/16,1", "[1/16]+,17/16,1"]
    code, text = call("dims", "--sector", "r", "--max-weight", "1", "--basis")
    assert json.loads(text)["basis"][0]["monomials"] == [[], ["0"]]


def test_zhu_twisted_report():
    code, text = call("zhu-twisted", "--max-weight", "6")
    rep = json.loads(text)
    assert code == 0 and rep["dim"] == 2 and rep["minimal_poly"] == "t^2-1/2"


def test_twisted_action_report():
    code, text = call("twisted-action", "--max-weight", "2")
    rep = json.loads(text)
    assert code == 0
    assert rep["v_plus_eigenvalue"] == "1/2*sqrt2" and rep["v_minus_eigenvalue"] == "-1/2*sqrt2"


def test_fusion_and_zhu():
    code, text = call("fusion")
    assert code == 0 and json.loads(text)["matrix"] == [[1, 0], [0, 1]]
    code, text = call("zhu", "--max-weight", "4")
    assert code == 0 and json.loads(text)["dim"] == 1


def test_small_checks_pass():
    assert call("virasoro-check", "--max-weight", "3", "--range", "2")[0] == 0
    assert call("jacobi-check", "--variant", "twisted", "--max-weight", "4", "--samples", "5")[0] == 0
    assert call("form-check", "--max-weight", "4", "--samples", "5")[0] == 0


def test_reports_carry_truncation_and_slack():
    for argv in (("fusion",), ("zhu-twisted",), ("dims",), ("conformal", "--test", "axioms")):
        rep = json.loads(call(*argv)[1])
        assert "max_weight" in rep and "slack" in rep


def test_exit_codes():
    assert call("bogus")[0] == 2
    assert call("dims", "--max-weight", "1/3")[0] == 2
    assert call("conformal", "--candidate", "{nope")[0] == 2
    assert call("conformal", "--test", "rational", "--max-weight", "4")[0] == 3
    assert call("zhu-twisted", "--max-weight", "1")[0] == 3
    bad = '{"factors": 1, "terms": [{"monomials": [["-3/2", "-1/2"]], "scalar": "1"}]}'
    code, text = call("conformal", "--candidate", bad)
    assert code == 1 and json.loads(text)["violated"] == "e_1 e = 2e"


def test_conformal_subcommand(tmp_path):
    path = tmp_path / "e.json"
    path.write_text('{"factors": 2, "terms": [{"monomials": [["-3/2", "-1/2"], []], "scalar": "1/2"}]}')
    for test in ("axioms", "rational", "decompose", "commutant"):
        code, text = call("conformal", "--test", test, "--candidate", str(path))
        assert code == 0, text
    rep = json.loads(call("conformal", "--test", "decompose")[1])
    assert rep["tau_is_identity"] and all(r["V_e(1/16)"] == 0 for r in rep["rows"])


def test_deterministic_and_cache_identical(tmp_path):
    argv = ("twisted-action", "--max-weight", "3", "--cache-dir", str(tmp_path))
    cold = call(*argv)[1]
    warm = call(*argv)[1]
    verified = call(*argv, "--verify-cache")[1]
    assert cold == warm == verified == call("twisted-action", "--max-weight", "3")[1]
    assert list(tmp_path.rglob("*.json"))


def test_env_var_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("ISING_SVOA_CACHE", str(tmp_path))
    call("virasoro-check", "--sector", "r", "--max-weight", "2", "--range", "1")
    assert list(tmp_path.rglob("*.json"))


def test_cache_entry_round_trip():
    key = cache_key(R, X, Fraction(-1, 2), 3)
    entry = CacheEntry(key, R, compute_matrix(R, X, Fraction(-1, 2), 3))
    back = CacheEntry.from_json(entry.to_json())
    assert back.entries == entry.entries and back.key == key
    assert key != cache_key(R, X, Fraction(1, 2), 3) != cache_key(NS, X, Fraction(-1, 2), 3)


def test_schema_mismatch_recomputes(tmp_path):
    cache = OperatorCache(tmp_path)
    entry = cache.matrix(NS, OMEGA, 1, 3)
    path = next(tmp_path.rglob("*.json"))
    obj = json.loads(path.read_text())
    obj["schema"] = SCHEMA_VERSION + 1
    obj["entries"] = []
    path.write_text(json.dumps(obj))
    fresh = OperatorCache(tmp_path)
    assert fresh.matrix(NS, OMEGA, 1, 3).entries == entry.entries
    assert fresh.misses == 1 and json.loads(path.read_text())["schema"] == SCHEMA_VERSION


def test_verify_detects_tampering(tmp_path):
    OperatorCache(tmp_path).matrix(NS, OMEGA, 1, 3)
    path = next(tmp_path.rglob("*.json"))
    obj = json.loads(path.read_text())
    obj["entries"][0][2] = "7"
    path.write_text(json.dumps(obj))
    with pytest.raises(CacheMismatch):
        OperatorCache(tmp_path, verify=True).matrix(NS, OMEGA, 1, 3)
    code, text = call("virasoro-check", "--sector", "ns", "--max-weight", "3", "--range", "1",
                      "--cache-dir", str(tmp_path), "--verify-cache")
    assert code == 1 and json.loads(text)["error"] == "cache"


def test_cache_apply_matches():
    entry = OperatorCache().matrix(R, X, Fraction(-1, 2), 2)
    v = Vector.basis_vector(R, (0,))
    assert entry.apply(v) == Vector.basis_vector(R, (), Fraction(1, 2))


def test_render_csv_fallback():
    text = render({"command": "x", "ok": True, "value": Fraction(1, 3)}, "csv")
    assert text.splitlines() == ["key,value", "command,x", "ok,True", "value,1/3"]


def test_config_defaults():
    assert Config().truncation().max_weight == 8
    assert Config().truncation(tensor=True).max_weight == 6


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ising_svoa", "fusion"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["ok"]
