"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s``.
"""

import time
from math import factorial

import pytest

from orbiconf.comma import ActionGroupoid, comma_report
from orbiconf.config import chi_c_report, conf_homology, stratum_model
from orbiconf.fixtures import antipodal_sphere, cone, disk, football, reflection_sphere, sphere
from orbiconf.groups import FiniteGroup
from orbiconf.maps import MapContext, duality_check, verify_dold, verify_stability, verify_transfer_degree
from orbiconf.orbifold import block_factorisation_holds


def report(capsys, k, ok, detail):
    with capsys.disabled():
        print(f"\nCRITERION {k} {'PASS' if ok else 'FAIL'}: {detail}")


def all_fixtures():
    return [disk(1), cone(3, 2), sphere(0), football(0), antipodal_sphere(0), reflection_sphere(1)]


def test_criterion_1_torsion(capsys):
    t = time.time()
    rep = conf_homology(sphere(1), 2, "integral")
    elapsed = time.time() - t
    ok = tuple(rep.torsion[1]) == (2,) and rep.betti[1] == 0 and elapsed <= 300
    report(capsys, 1, ok, f"H_1(Conf_2(S^2); Z) torsion {list(rep.torsion[1])}, {elapsed:.1f}s")
    assert ok


def test_criterion_2_disk_stability(capsys):
    t = time.time()
    table = verify_stability(disk(1), 3)
    elapsed = time.time() - t
    dims = {n: tuple(r["dim_n"] for r in table["rows"] if r["n"] == n) for n in (1, 2, 3)}
    ok = table["pass"] and dims == {1: (1,), 2: (1, 1), 3: (1, 1)} and elapsed <= 600
    report(capsys, 2, ok, f"disk dims {dims}, ranks ok={table['pass']}, {elapsed:.1f}s")
    assert ok


def test_criterion_3_cone_stability(capsys):
    t = time.time()
    table = verify_stability(cone(3, 2), 2)
    elapsed = time.time() - t
    want = {(1, 0), (2, 0), (2, 1)}
    got = {(r["n"], r["degree"]) for r in table["rows"]}
    ok = table["pass"] and want <= got and elapsed <= 900
    pairs = [(r["n"], r["degree"], r["dim_n"], r["dim_n+1"]) for r in table["rows"]]
    report(capsys, 3, ok, f"cone [D^2/Z_3] (n, k, dim_n, dim_n+1) {pairs}, {elapsed:.1f}s")
    assert ok


def test_criterion_4_transfer_degree(capsys):
    checked = 0
    failures = []
    for X in all_fixtures():
        ctx = MapContext(X)
        for n in (1, 2, 3):
            for r in verify_transfer_degree(X, n, ctx):
                checked += 1
                if not r["pass"]:
                    failures.append((X.name, n, r["m"], r["degree"]))
    ok = checked > 0 and not failures
    report(capsys, 4, ok, f"p_* p^! = C(n,m) id: {checked} degree checks, failures {failures}")
    assert ok


def test_criterion_5_dold(capsys):
    X = disk(1)
    ctx = MapContext(X)
    rows = verify_dold(X, 2, ctx) + verify_dold(X, 3, ctx)
    names = {r["relation"] for r in rows}
    required = {"t_2 s_1 = s_0 t_1 + id", "t_3 s_2 = s_1 t_2 + id", "t_2...t_3 = 2! t_3,1"}
    ok = bool(rows) and all(r["pass"] for r in rows) and required <= names
    report(capsys, 5, ok, f"{len(rows)} relation checks on the disk, relations {sorted(names)}")
    assert ok


def test_criterion_6_duality(capsys):
    results = [(name, n, duality_check(X, n)) for name, X, n in
               [("S^2", sphere(0), 1), ("S^2", sphere(0), 2), ("football", football(0), 1)]]
    ok = all(r["pass"] for _, _, r in results)
    detail = "; ".join(f"{name} n={n} H={r['homology']} Hc={r['cohomology']}" for name, n, r in results)
    report(capsys, 6, ok, detail)
    assert ok


def test_criterion_7_block_factorisation(capsys):
    checked = []
    for X in all_fixtures():
        n = 1
        while True:
            if X.G.order ** n * factorial(n) > 10**4:
                break
            for m in range(n + 1):
                assert block_factorisation_holds(X, n, m), (X.name, n, m)
            checked.append((X.name, n))
            n += 1
    ok = len(checked) >= len(all_fixtures())
    report(capsys, 7, ok, f"omega_n block factorisation exhaustive for {checked}")
    assert ok


def test_criterion_8_chi_c(capsys):
    reps = [chi_c_report(football(0), n) for n in (1, 2)]
    ok = all(r["additive"] for r in reps)
    detail = "; ".join(f"n={n} total={r['total']} strata={r['strata']}" for n, r in zip((1, 2), reps))
    report(capsys, 8, ok, f"football chi_c additivity {detail}")
    assert ok


def test_criterion_9_comma(capsys):
    t = time.time()
    bases = [("trivial-6", ActionGroupoid.trivial(6)),
             ("Z2-3orbits", ActionGroupoid(FiniteGroup.generated_by([(1, 0, 3, 2, 5, 4)])))]
    rows = [(name, comma_report(base, n, m)) for name, base in bases for n in range(1, 6) for m in range(n)]
    elapsed = time.time() - t
    ok = all(r["pass"] for _, r in rows) and elapsed <= 120
    nonempty = sum(1 for _, r in rows if r["objects"])
    report(capsys, 9, ok, f"{len(rows)} (base, n, m) cases, {nonempty} with objects, skeleta discrete of size "
                          f"C(n,m), b* invariant, {elapsed:.1f}s")
    assert ok


@pytest.mark.slow
def test_criterion_10_subdivision_stability(capsys):
    mismatches = []
    # criterion 2 numbers: disk, degrees 0..1, n = 1..4
    for n in range(1, 5):
        a = conf_homology(disk(1), n, max_degree=1).betti[:2]
        b = conf_homology(disk(2), n, max_degree=1).betti[:2]
        if a != b:
            mismatches.append(("disk", n, a, b))
    # criterion 3 numbers: cone, degrees 0..1, n = 1..3
    for n in range(1, 4):
        a = conf_homology(cone(3, 2), n, max_degree=1).betti[:2]
        b = conf_homology(cone(3, 3), n, max_degree=1).betti[:2]
        if a != b:
            mismatches.append(("cone", n, a, b))
    # criterion 3 per-stratum numbers
    for r in verify_stability(cone(3, 2), 2)["strata"]:
        k = r["degree"]
        for n, dim in ((r["n"], r["dim_n"]), (r["n"] + 1, r["dim_n+1"])):
            b = stratum_model(cone(3, 3), n, r["m"], max_degree=k).homology(k).betti[k]
            if b != dim:
                mismatches.append(("cone stratum", n, r["m"], k, dim, b))
    # criterion 6 numbers: both sides of each duality check
    for name, make, n in [("S^2", sphere, 1), ("S^2", sphere, 2), ("football", football, 1)]:
        a, b = duality_check(make(0), n), duality_check(make(1), n)
        if not b["pass"] or (a["homology"], a["cohomology"]) != (b["homology"], b["cohomology"]):
            mismatches.append((name, n, a["homology"], b["homology"]))
    ok = not mismatches
    report(capsys, 10, ok, f"Betti numbers unchanged at subdivision r+1, mismatches {mismatches}")
    assert ok
