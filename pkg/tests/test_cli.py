import json

import pytest

from conftest import FIXTURES
from latkit import fileformat as ff
from latkit.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def fx(name):
    return FIXTURES / name


def test_check_passes(capsys):
    code, out = run(capsys, "check", "--kind", "strong-proximity-jsl", fx("chain2.lk"))
    assert code == 0
    assert "pass" in out


def test_check_failure_prints_witness(capsys):
    code, out = run(capsys, "check", "--kind", "localized-strong-proximity-jsl", fx("m3.lk"), "--json")
    assert code == 1
    report = json.loads(out)
    assert report["exit_code"] == 1
    assert report["diagnosis"]["witnesses"]


def test_parse_error_exit(capsys, tmp_path):
    bad = tmp_path / "dup.lk"
    bad.write_text("format: latkit/1\nkind: poset\natoms: a a\n")
    code, _ = run(capsys, "check", bad)
    assert code == 2
    code, _ = run(capsys, "check", tmp_path / "missing.lk")
    assert code == 2


def test_usage_error_exit(capsys):
    assert main(["nonsense"]) == 2
    assert main(["powerlocale", "sideways", str(fx("one.lk"))]) == 2
    capsys.readouterr()


def test_powerlocale_emit(capsys):
    code, out = run(capsys, "powerlocale", "lower", fx("one.lk"), "--emit")
    assert code == 0
    doc = ff.parse(out)
    assert doc.kind == "localized-strong-proximity-jsl"
    assert doc.structure.n == 2


def test_cap_exit_code(capsys, monkeypatch):
    code, _ = run(capsys, "powerlocale", "double", fx("diamond.lk"), "--cap", "4")
    assert code == 3
    monkeypatch.setenv("LATKIT_CAP", "4")
    code, _ = run(capsys, "powerlocale", "double", fx("diamond.lk"))
    assert code == 3


@pytest.mark.parametrize(
    "argv",
    [
        ("complete", "chain2.lk"),
        ("strengthen", "gap2.lk"),
        ("to-ftop", "chain2-cover.lk"),
        ("from-ftop", "chain2-cbc.lk"),
        ("powerlocale", "upper", "diamond.lk"),
        ("powerlocale", "double", "chain2.lk"),
    ],
)
def test_commands_succeed_with_json(capsys, argv):
    args = [fx(a) if a.endswith(".lk") else a for a in argv]
    code, out = run(capsys, *args, "--json")
    assert code == 0
    assert json.loads(out)["exit_code"] == 0


def test_emitted_structures_reparse(capsys):
    for argv in (("strengthen", "gap2.lk"), ("to-ftop", "chain2-cover.lk"), ("from-ftop", "chain2-cbc.lk")):
        code, out = run(capsys, argv[0], fx(argv[1]), "--emit")
        assert code == 0
        assert ff.dumps(ff.parse(out, validate=True)) == out


def test_classify_map(capsys):
    cover = fx("chain2-cover.lk")
    code, out = run(capsys, "classify-map", cover, cover, "--map", "o->{} i->{i}")
    assert code == 0 and "lawson: pass" in out


def test_enumerate_counts(capsys, tmp_path):
    code, out = run(capsys, "enumerate", "poset", "--max-size", "2", "--json")
    assert code == 0
    assert json.loads(out)["counts"] == {"1": 1, "2": 2}
    code, out = run(capsys, "enumerate", "proximity-poset", "--max-size", "1", "--json")
    assert json.loads(out)["counts"] == {"1": 1}
    cat = tmp_path / "strong.ndjson"
    code, _ = run(capsys, "enumerate", "strong-proximity-jsl", "--max-size", "3", "--catalog", cat)
    assert code == 0 and len(cat.read_text().splitlines()) == 8
    code, _ = run(capsys, "suite", "localized", "--catalog", cat, "--max-size", "3")
    assert code == 0
    code, _ = run(capsys, "enumerate", "strong-proximity-jsl", "--max-size", "5")
    assert code == 3


def test_suite_reports_counts(capsys):
    code, out = run(capsys, "suite", "starlemmas", "--max-size", "2", "--json")
    assert code == 0
    report = json.loads(out)
    suite = report["suites"][0]
    assert suite["suite"] == "starlemmas"
    assert all(c["cases"] > 0 and c["failures"] == 0 for c in suite["checks"])
