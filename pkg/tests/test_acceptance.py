"""Acceptance criteria 1-10, one line of output per criterion.

Each test prints ``criterion N: pass|FAIL (...)`` straight to the terminal
so the lines survive pytest's output capture.
"""
import io
import json
import time
from contextlib import redirect_stdout

import pytest

from latkit import relcore as rc
from latkit import suites
from latkit.cli import main

ABC = rc.Carrier.of("a", "b", "c")


def fam(*sets):
    return rc.FinFamily.of(ABC.subset(s) for s in sets)


def report(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {number}: {'pass' if ok else 'FAIL'} ({detail})")


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


def summary(checks):
    return f"{sum(c.cases for c in checks)} cases, {sum(c.failures for c in checks)} failures"


@pytest.fixture(scope="module")
def roundtrips():
    return timed(suites.roundtrips)


def pick(rep, prefix):
    found = [c for c in rep.checks if c.name.startswith(prefix)]
    assert found, prefix
    return found


def test_criterion_01_star_goldens(capsys):
    def golden():
        return (
            rc.star(fam("a", "b")) == fam("ab"),
            rc.star(fam("ab", "c")) == fam("abc", "ac", "bc"),
            rc.star(rc.star(fam("ab", "c"))) == fam("abc", "ab", "ac", "bc", "c"),
        )

    results, dt = timed(golden)
    ok = all(results) and dt < 1
    report(capsys, 1, ok, f"{sum(results)}/3 exact, {dt:.3f} s")
    assert ok


def test_criterion_02_star_lemmas(capsys):
    rep, dt = timed(suites.starlemmas, max_size=3, swap_exhaustive=2)
    sampled = pick(rep, "swap lemma (sampled")[0]
    ok = rep.ok and sampled.cases >= 10**4 and dt < 60
    report(capsys, 2, ok, f"{summary(rep.checks)}, {sampled.cases} sampled swaps, {dt:.1f} s")
    assert ok


def test_criterion_03_comonad(capsys):
    rep, dt = timed(suites.comonad, max_size=2, samples=100, sample_size=3)
    sizes = rep.checks[0].cases
    ok = rep.ok and rep.skipped == 0 and sizes >= 100 and dt < 120
    report(capsys, 3, ok, f"{summary(rep.checks)}, {rep.skipped} skipped, {dt:.1f} s")
    assert ok


def test_criterion_04_distributive_law(capsys):
    rep, dt = timed(suites.distributive, max_size=2)
    names = {c.name.split(":")[0] for c in rep.checks}
    need = {"τ∘σ = id", "σ∘τ = id", "diagram 1", "diagram 2", "diagram 3", "diagram 4"}
    ok = rep.ok and need <= names and dt < 120
    report(capsys, 4, ok, f"{summary(rep.checks)}, {dt:.1f} s")
    assert ok


def test_criterion_05_localization_equivalence(capsys):
    rep, dt = timed(suites.localized, max_size=4)
    agree = pick(rep, "localized ⟺")
    ok = all(c.ok for c in agree) and agree[0].cases > 0 and agree[0].skipped == 0 and dt < 300
    report(capsys, 5, ok, f"{summary(agree)}, {dt:.1f} s")
    assert ok


def test_criterion_06_strengthening(capsys, roundtrips):
    rep, dt = roundtrips
    checks = pick(rep, "strengthen:")
    ok = len(checks) == 4 and all(c.ok and c.cases > 0 for c in checks) and dt < 60
    report(capsys, 6, ok, f"{summary(checks)}, {dt:.1f} s")
    assert ok


def test_criterion_07_upper_coalgebra(capsys):
    rep, dt = timed(suites.localized, max_size=1, coalgebra_size=3)
    checks = pick(rep, "upper coalgebra")
    ok = all(c.ok and c.cases > 0 for c in checks) and dt < 60
    report(capsys, 7, ok, f"{summary(checks)}, {dt:.1f} s")
    assert ok


def test_criterion_08_cover_round_trips(capsys, roundtrips):
    rep, dt = roundtrips
    checks = pick(rep, "J ≅") + pick(rep, "(S, ◁)") + pick(rep, "P/Q") + pick(rep, "cfc_from_cbc")
    ok = all(c.ok and c.cases > 0 for c in checks) and dt < 120
    report(capsys, 8, ok, f"{summary(checks)}, {dt:.1f} s")
    assert ok


def test_criterion_09_morphism_bijections(capsys, roundtrips):
    rep, dt = roundtrips
    checks = pick(rep, "map bijections") + pick(rep, "FTM1/FTM2")
    ok = all(c.ok and c.cases > 0 for c in checks) and dt < 120
    report(capsys, 9, ok, f"{summary(checks)}, {dt:.1f} s")
    assert ok


def test_criterion_10_determinism(capsys):
    runs = []
    for _ in range(2):
        buf = io.StringIO()
        with redirect_stdout(buf):
            code = main(["suite", "all", "--json"])
        runs.append((code, buf.getvalue().encode()))
    same = runs[0][1] == runs[1][1]
    verdict = json.loads(runs[0][1])["verdict"]
    ok = same and runs[0][0] == 0
    report(capsys, 10, ok, f"byte-identical: {same}, {len(runs[0][1])} bytes, verdict {verdict}")
    assert ok
