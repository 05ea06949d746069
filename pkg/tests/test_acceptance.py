"""Acceptance criteria 1-8.  Each test prints one ``criterion N: PASS|FAIL ...`` line."""

import random
import subprocess
import sys

import pytest

from nonfree.algebra import QQ, PolyRing
from nonfree.constructions import build_example1, build_example2, build_example3, example2_ring
from nonfree.groebner import Ideal
from nonfree.loci import sing_witness_ideal
from nonfree.modules import ModulePresentation, QuotientRing, canonical_module
from nonfree.report import parse_report, report_body
from nonfree.totref import check_totally_c_reflexive_bounded, is_mcm

import kernel_checks
from oracles import Coeffs, from_dict, random_dict, random_ring


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail

    return emit


def hypersurface():
    P = PolyRing(QQ, ["a", "b"])
    return QuotientRing(P, [P("a^2")])


def test_criterion_1_example1(verdict):
    problems = []
    for char in (0, 101):
        items = {it.name: it for it in build_example1(char)}
        if len(items) != 6:
            problems.append(f"char {char}: {len(items)} items")
        problems += [f"char {char}: {n}" for n, it in items.items() if it.verdict != "PASS"]
        ev = items["2_dim_depth"].evidence
        if [ev["dim"], ev["depth"]] != [2, 1]:
            problems.append(f"char {char}: dim/depth {ev['dim']}/{ev['depth']}")
        primes = sorted(sorted(p) for p in items["3_minimal_primes"].evidence["primes"])
        if primes != [["w", "x", "z"], ["x", "y"]]:
            problems.append(f"char {char}: primes {primes}")
        if items["4_total_reflexivity"].evidence.get("period") != 1:
            problems.append(f"char {char}: period")
    verdict(1, not problems, "6/6 items over Q and F_101" if not problems else "; ".join(problems))


def test_criterion_2_example2(verdict):
    items = {it.name: it for it in build_example2(0)}
    ev = items["5_shrink"].evidence
    R = example2_ring()
    p = R.ideal_of([R.poly_ring("t"), R.poly_ring("x")])
    final = R.ideal_of(R.poly_ring(g) for g in ev["final_locus"] or ["1"])
    checks = {
        "grade_positive": items["1_grade_positive"].evidence.get("value") is True,
        "dim R/p = 2": items["2_dim_quotient"].verdict == "PASS",
        "one iteration": ev.get("iterations") == 1,
        "strict descent": all(s["strict_descent"] and s["contains_target"] for s in ev["steps"]),
        "NF(L) = V(p)": final.locus_equal(p),
        "all PASS": all(it.verdict == "PASS" for it in items.values()),
    }
    bad = [k for k, v in checks.items() if not v]
    verdict(2, not bad, "grade, dimension, 1-iteration shrink onto V(t,x)" if not bad else f"failed: {bad}")


def test_criterion_3_example3(verdict):
    items = build_example3(count=10, max_degree=3, seed=7, truncation=3)
    members = [it for it in items if it.name.startswith("member_")]
    pairs = [it for it in items if it.name.startswith("pair_")]
    cert = sum(it.evidence["checks"]["periodic_certificate"] and it.evidence["checks"]["square_zero"]
               for it in members)
    nf = sum(it.evidence["checks"]["nonfree_locus"] for it in members)
    indec = sum(it.evidence["indecomposable"]["verdict"] == "indecomposable" for it in members)
    distinct = sum(it.evidence["gb_distinct"] for it in pairs)
    nf_distinct = sum(it.evidence["nf_distinct"] for it in pairs)
    ok = (len(members), cert, nf, indec, len(pairs), distinct) == (10, 10, 10, 10, 45, 45)
    ok = ok and all(it.verdict == "PASS" for it in items)
    verdict(3, ok, f"members {len(members)}, certified {cert}/10, NF=V(p^f) {nf}/10, indecomposable "
                   f"{indec}/10, distinct pairs {distinct}/{len(pairs)} (NF-distinct {nf_distinct})")


def test_criterion_4_cover_independence(verdict):
    results = [kernel_checks.cover_instance(seed) for seed in range(20)]
    good = sum(ok for ok, _ in results)
    bad = [msg for ok, msg in results if not ok]
    verdict(4, good == 20, f"{good}/20 locus_equal" + (f"; {bad}" if bad else ""))


def test_criterion_5_sing_witness(verdict):
    R = hypersurface()
    p = R.ideal_of([R.poly_ring("a")])
    w = sing_witness_ideal(R, p)
    ok = w.gb == p.gb
    verdict(5, ok, f"Ann Tor_1 = ({', '.join(w.to_strings())})")


def test_criterion_6_gk_is_mcm(verdict):
    R = hypersurface()
    P = R.poly_ring
    K = canonical_module(R)
    samples = {
        "R": (ModulePresentation.free(R, 1), True),
        "R/aR": (ModulePresentation.cyclic(R, [P("a")]), True),
        "R/(a,b)": (ModulePresentation.cyclic(R, [P("a"), P("b")]), False),
    }
    matched = []
    for name, (M, want) in samples.items():
        res = check_totally_c_reflexive_bounded(M, K, 4)
        if res.ok == want and is_mcm(M) == want:
            matched.append(name)
    verdict(6, len(matched) == 3, f"{len(matched)}/3 verdicts as stated ({', '.join(matched)})")


def test_criterion_7_kernel_properties(verdict):
    suites = {
        "syzygy": [kernel_checks.syzygy_instance(s) for s in range(50)],
        "intersection/quotient": [kernel_checks.intersection_quotient_instance(s) for s in range(30)],
        "radical": [kernel_checks.radical_instance(s) for s in range(30)],
        "membership": [kernel_checks.membership_instance(s) for s in range(30)],
    }
    # Buchberger criterion on reduced bases of random dense ideals
    gb_ok = []
    for s in range(30):
        rng = random.Random(1000 + s)
        n = rng.choice([2, 3])
        P = random_ring(rng, n)
        gens = [from_dict(P, random_dict(rng, n, 3, 3, Coeffs(0))) for _ in range(rng.randint(1, 3))]
        I = Ideal(P, [g for g in gens if g] or [P.one])
        gb_ok.append((kernel_checks.gb_is_groebner(I) and I.is_groebner_basis_valid(), f"seed {s}"))
    suites["Buchberger criterion"] = gb_ok
    parts = []
    ok = True
    for name, res in suites.items():
        good = sum(r for r, _ in res)
        ok = ok and good == len(res)
        parts.append(f"{name} {good}/{len(res)}")
    verdict(7, ok, ", ".join(parts))


def test_criterion_8_determinism(verdict):
    cmd = [sys.executable, "-m", "nonfree.cli", "verify-example", "3", "--seed", "7"]
    runs = [subprocess.run(cmd, capture_output=True, text=True) for _ in range(2)]
    bodies = [report_body(r.stdout) for r in runs]
    same = bodies[0] == bodies[1] and bool(bodies[0])
    status = [r.returncode for r in runs]
    n = len(parse_report(runs[0].stdout).items) if same else 0
    verdict(8, same and status == [0, 0], f"identical bodies ({len(bodies[0])} bytes, {n} items), exit {status}")
