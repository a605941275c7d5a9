import json

import pytest

from affchar import cli
from affchar.cache import SCHEMA_VERSION, CharacterCache, cache_key
from affchar.cartan import build_root_system
from affchar.charring import GradedCharacter
from affchar.demazure import weyl_gch


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_branch_json(capsys):
    code, out, _ = run(capsys, "branch", "--type", "A", "--rank", "1", "--level", "1", "--weight", "4")
    assert code == 0
    data = json.loads(out)
    assert data["schema_version"] == SCHEMA_VERSION
    coeffs = {tuple(c["weight"]): c["poly"] for c in data["coeffs"]}
    assert coeffs == {(4,): [[0, 1]], (2,): [[2, 1], [3, 1]], (0,): [[4, 1]]}


def test_branch_latex_and_csv(capsys):
    _, out, _ = run(capsys, "branch", "--level", "1", "--weight", "2", "--format", "latex")
    assert out == "q\\,\\mathrm{gch}\\,W^{(2)}_{(0)} + \\mathrm{gch}\\,W^{(2)}_{(2)}\n"
    _, out, _ = run(capsys, "branch", "--level", "1", "--weight", "2", "--format", "csv")
    assert out.splitlines() == ["weight,q,coeff", "0,1,1", "2,0,1"]


def test_orbit(capsys):
    assert run(capsys, "orbit", "--level", "1", "--lambda", "0", "--mu", "6")[1] == "9\n"
    assert run(capsys, "orbit", "--level", "1", "--lambda", "0", "--mu", "5")[1] == "none\n"


def test_char_weyl(capsys):
    code, out, _ = run(capsys, "char", "--family", "weyl", "--level", "2", "--weight", "2")
    assert code == 0
    terms = {(tuple(t["weight"]), t["q"]): t["coeff"] for t in json.loads(out)["terms"]}
    assert terms == {((-2,), 0): 1, ((0,), 0): 1, ((2,), 0): 1}
    _, out, _ = run(capsys, "char", "--family", "weyl", "--level", "1", "--weight", "2", "--format", "latex")
    assert out == "\\mathrm{ch}\\,V_{(2)} + q\\,\\mathrm{ch}\\,V_{(0)}\n"


@pytest.mark.parametrize("family,extra", [("thin", ["--level", "1"]), ("irrep", []),
                                          ("thick", ["--level", "2", "--qmax", "3"]),
                                          ("projective", ["--qmax", "2"])])
def test_char_families(capsys, family, extra):
    code, out, _ = run(capsys, "char", "--family", family, "--type", "A", "--rank", "2",
                       "--weight", "1,0", *extra)
    assert code == 0
    assert json.loads(out)["family"] == family


def test_expand_thick(capsys):
    code, out, _ = run(capsys, "expand", "--family", "thick", "--level", "2", "--weight", "0", "--qmax", "10",
                       "--basis", "thick", "--basis-level", "1")
    assert code == 0
    coeffs = {tuple(c["weight"]): c["poly"] for c in json.loads(out)["coeffs"]}
    assert coeffs == {(0,): [[0, 1]], (2,): [[1, 1]], (4,): [[4, 1]], (6,): [[9, 1]]}


def test_expand_thin_basis(capsys):
    code, out, _ = run(capsys, "expand", "--family", "thin", "--level", "1", "--weight", "-2",
                       "--basis", "D", "--basis-level", "2")
    assert code == 0
    coeffs = {tuple(c["weight"]): c["poly"] for c in json.loads(out)["coeffs"]}
    assert coeffs == {(-2,): [[0, 1]], (0,): [[1, 1]]}


def test_kostka_command(capsys):
    code, out, _ = run(capsys, "kostka", "--factor", "1:2", "--level", "1")
    assert code == 0
    data = json.loads(out)
    assert data["simply_laced"] is True
    assert {tuple(c["weight"]): c["poly"] for c in data["coeffs"]} == {(2,): [[0, 1]], (0,): [[1, 1]]}


@pytest.mark.parametrize("argv", [
    ["branch", "--rank", "2", "--level", "1", "--weight", "4"],
    ["branch", "--level", "0", "--weight", "4"],
    ["branch", "--level", "1", "--weight", "x"],
    ["char", "--family", "thick", "--level", "1", "--weight", "0"],
    ["char", "--family", "thin", "--weight", "0", "--qmax", "-1", "--level", "1"],
    ["branch", "--type", "Z", "--level", "1", "--weight", "4"],
    ["nonsense"],
])
def test_usage_errors(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 2 and out == ""


def test_precondition_errors(capsys):
    code, out, err = run(capsys, "branch", "--level", "1", "--weight", "-4")
    assert code == 3 and out == "" and "dominant" in err
    code, _, _ = run(capsys, "orbit", "--level", "1", "--lambda", "3", "--mu", "3")
    assert code == 3


def test_verify_suite(capsys):
    code, out, err = run(capsys, "verify", "--suite", "sl2-paper")
    assert code == 0
    data = json.loads(out)
    assert data["passed"] and len(data["checks"]) == 2
    assert err.count("PASS") == 2


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "kostka", "--format", "csv")
    assert code == 1
    assert out.startswith("FAIL P9 Kostka stabilization (K >= n)")
    assert "mismatches" in out


def test_outputs_are_byte_stable(capsys, tmp_path):
    argv = ["char", "--family", "thick", "--type", "A", "--rank", "2", "--level", "2", "--weight", "1,1",
            "--qmax", "2"]
    plain = run(capsys, *argv)[1]
    cold = run(capsys, *argv, "--cache-dir", str(tmp_path))[1]
    warm = run(capsys, *argv, "--cache-dir", str(tmp_path))[1]
    assert plain == cold == warm
    assert len(list(tmp_path.glob("*.json"))) == 1


def test_cache_env_var(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("AFFCHAR_CACHE_DIR", str(tmp_path))
    run(capsys, "char", "--family", "weyl", "--level", "1", "--weight", "3")
    assert len(list(tmp_path.glob("*.json"))) == 1


@pytest.fixture
def store(tmp_path):
    return CharacterCache(tmp_path)


def test_cache_round_trip(store, a1):
    f = weyl_gch(a1, (4,), 1)
    key = cache_key("A", 1, "weyl", (4,), 1, None)
    path = store.put(key, f, {"family": "weyl"})
    first = path.read_bytes()
    got = store.get(key, 1)
    assert got.terms == f.terms and got.level == f.level
    store.put(key, got, {"family": "weyl"})
    assert path.read_bytes() == first


def test_cache_miss_recomputes(store, a1):
    calls = []

    def compute():
        calls.append(1)
        return weyl_gch(a1, (2,), 1)

    for _ in range(2):
        store.get_or_compute(a1, "weyl", (2,), 1, None, compute)
    assert len(calls) == 1


def test_cache_corrupt_entry_is_recomputed(store, a1, caplog):
    key = cache_key("A", 1, "weyl", (2,), 1, None)
    path = store.put(key, weyl_gch(a1, (2,), 1), {})
    data = json.loads(path.read_text())
    data["terms"][0]["coeff"] = 7
    path.write_text(json.dumps(data))
    assert store.get(key, 1) is None
    assert "self-check" in caplog.text
    path.write_text("{not json")
    assert store.get(key, 1) is None
    fresh = store.get_or_compute(a1, "weyl", (2,), 1, None, lambda: weyl_gch(a1, (2,), 1))
    assert store.get(key, 1).terms == fresh.terms


def test_cache_ignores_other_schema(store, a1):
    key = cache_key("A", 1, "weyl", (2,), 1, None)
    path = store.put(key, weyl_gch(a1, (2,), 1), {})
    data = json.loads(path.read_text())
    data["schema_version"] = SCHEMA_VERSION - 1
    path.write_text(json.dumps(data))
    assert store.get(key, 1) is None


def test_cache_keys_separate_requests():
    keys = {cache_key("A", 1, "weyl", (2,), 1, None), cache_key("A", 1, "weyl", (2,), 2, None),
            cache_key("A", 1, "thick", (2,), 1, 5), cache_key("A", 1, "thick", (2,), 1, 6),
            cache_key("C", 2, "weyl", (2, 0), 1, None)}
    assert len(keys) == 5
