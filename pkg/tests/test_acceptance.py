"""Acceptance criteria 1-8; each test records a one-line verdict."""
import itertools
import time

import numpy as np
import pytest

from eqposets import catalog, verify as V
from eqposets.fields import gf2_tower, qsqrt2_tower
from eqposets.poset import disjoint_union, dual_poset, one_parameter_criterion, sincere_class
from eqposets.subspace import FSub, all_subspaces
from eqposets.tits import DimVector, tits_form

from conftest import record

P = catalog.catalog_poset


@pytest.fixture(scope="module")
def oracle():
    """Brute-force results on the criterion-5 box, shared with criterion 7."""
    T = gf2_tower()
    out, secs = {}, {}
    for pid in ("K6", "A25"):
        t0 = time.perf_counter()
        out[pid] = V.brute_force_indecomposables(P(pid), 2, T)
        secs[pid] = time.perf_counter() - t0
    return out, secs


def test_criterion_1_tables():
    t0 = time.perf_counter()
    rep = V.verify_tits_tables()
    table_rows = [r for r in rep.rows if " T=" in r[0] or "mu=" in r[0]]
    mu7 = tits_form(P("K7"), DimVector.of(P("K7"), 2, [1, 1, 1, 1]))
    mu9 = tits_form(P("K9"), DimVector.of(P("K9"), 3, [2, 2, 1, 1]))
    secs = time.perf_counter() - t0
    bad = [r for r in table_rows if r[3] != "pass"]
    ok = not bad and mu7 == 0 and mu9 == 0 and secs < 1.0
    record(1, ok, f"{len(table_rows) - len(bad)}/{len(table_rows)} table rows match; "
                  f"mismatches: {', '.join(r[0] for r in bad) or 'none'}", secs)
    assert mu7 == 0 and mu9 == 0
    assert not bad, bad
    assert secs < 1.0


def test_criterion_2_families():
    t0 = time.perf_counter()
    bad, n = [], 0
    allowed_d = {"A45", "A46", "A47", "A48"}
    for pid in catalog.families():
        for k in range(1, 6):
            d, f = catalog.sincere_dims(pid, k)
            n += 1
            got = tits_form(catalog.sincere_poset(pid), d)
            legal = {1, 2, 4} if pid in allowed_d else {1, 2}
            if got != f or f not in legal:
                bad.append((pid, k, f, got))
    special = [catalog.sincere_dims(p, 1)[1] for p in ("A45", "A47")]
    ok = not bad and special == [4, 4]
    record(2, ok, f"{n - len(bad)}/{n} family annotations reproduced", time.perf_counter() - t0)
    assert not bad and special == [4, 4]


def test_criterion_3_criterion():
    t0 = time.perf_counter()
    problems = []
    for pid in catalog.SINCERE_IDS:
        Q = P(pid)
        for R, kind in ((Q, "iso"), (dual_poset(Q), "anti")):
            if one_parameter_criterion(R).status != "OneParameter":
                problems.append(f"{R.name} criterion")
            hit = sincere_class(R)
            self_dual = kind == "anti" and hit == (pid, "iso")
            if hit is None or hit[0] != pid or (hit[1] != kind and not self_dual):
                problems.append(f"{R.name} sincere_class={hit}")
    for pid in catalog.FINITE_IDS:
        if one_parameter_criterion(P(pid)).status != "FiniteTypeCandidate":
            problems.append(pid)
    if one_parameter_criterion(disjoint_union(P("K6"), P("K8"))).status != "NotOneParameter":
        problems.append("K6+K8")
    record(3, not problems, f"{len(catalog.SINCERE_IDS)} posets and duals, {len(catalog.FINITE_IDS)} finite, "
                            f"K6+K8; problems: {problems or 'none'}", time.perf_counter() - t0)
    assert not problems


def test_criterion_4_catalog():
    t0 = time.perf_counter()
    reps = [V.verify_catalog(gf2_tower()), V.verify_catalog(qsqrt2_tower())]
    secs = time.perf_counter() - t0
    rows = sum(len(r.rows) for r in reps)
    undecided = [r for rep in reps for r in rep.rows if "undecided" in r[2].lower()]
    ok = all(r.passed for r in reps) and not undecided and secs < 120
    record(4, ok, f"{rows} rows over gf2 and qsqrt2; "
                  f"failures: {[f[0] for r in reps for f in r.failures] or 'none'}", secs)
    for r in reps:
        assert not r.failures, r.failures
    assert secs < 120


def test_criterion_5_theorem_d(oracle):
    res, secs = oracle
    t0 = time.perf_counter()
    reps = [V.verify_theorem_d(P(pid), 2, results=res[pid]) for pid in ("K6", "A25")]
    unit = res["K6"][DimVector.of(P("K6"), 1, [1, 1])].count
    spot = V.gf3_spot_check()
    total = sum(secs.values()) + time.perf_counter() - t0
    ok = all(r.passed for r in reps) and unit == 3 and spot.passed and total < 600
    record(5, ok, f"{sum(len(r.rows) for r in reps)} vectors; K6 (1;1,1) has {unit} classes; "
                  f"GF(3) spot check {'pass' if spot.passed else 'fail'}", total)
    for r in reps:
        assert not r.failures, r.failures
    assert unit == 3 and spot.passed and total < 600


def test_criterion_6_series():
    t0 = time.perf_counter()
    reps = [V.verify_series_separation("K6", 1), V.verify_series_separation("K6", 2),
            V.verify_series_separation("K7", 1)]
    secs = time.perf_counter() - t0
    ok = all(r.passed for r in reps) and secs < 300
    record(6, ok, f"{sum(len(r.rows) for r in reps)} rows over K6 n=1,2 and K7 n=1", secs)
    for r in reps:
        assert not r.failures, r.failures
    assert secs < 300


def test_criterion_7_duality(oracle):
    res, _ = oracle
    t0 = time.perf_counter()
    reps = [V.verify_duality_suite(P(pid), 2, results=res[pid]) for pid in ("K6", "A25")]
    secs = time.perf_counter() - t0
    fails = [f[0] for r in reps for f in r.failures]
    record(7, not fails, f"{sum(len(r.rows) for r in reps)} rows; failures: {fails or 'none'}", secs)
    for r in reps:
        assert not r.failures, r.failures


def test_criterion_8_subspaces():
    t0 = time.perf_counter()
    T = gf2_tower()
    problems = []
    for n in (1, 2):
        subs = all_subspaces(T, n)
        if n == 2:
            # every triple of vectors of F^4, plus the whole space, filtered to distinct spans
            vecs = list(itertools.product(range(2), repeat=4))
            cands = {FSub(T, 2, np.array(t, dtype=np.int64)).key()
                     for t in itertools.product(vecs, repeat=3)}
            cands.add(FSub.full(T, 2).key())
            if cands != {U.key() for U in subs}:
                problems.append("candidate filter")
        strong = [U for U in subs if U.is_strong]
        for U in subs:
            h, c, p = U.hull(), U.cohull(), U.perp()
            if not (h.is_strong and h.contains(U) and all(W.contains(h) for W in strong if W.contains(U))):
                problems.append(f"hull n={n}")
            if not (c.is_strong and U.contains(c) and all(c.contains(W) for W in strong if U.contains(W))):
                problems.append(f"cohull n={n}")
            if p.perp() != U or U.dim + p.dim != 2 * n:
                problems.append(f"perp n={n}")
            if U.is_strong and not p.is_strong:
                problems.append(f"strong perp n={n}")
            if c.perp() != p.hull() or h.perp() != p.cohull():
                problems.append(f"exchange n={n}")
        for U, W in itertools.product(subs, repeat=2):
            if W.contains(U) and not U.perp().contains(W.perp()):
                problems.append(f"antitone n={n}")
    secs = time.perf_counter() - t0
    record(8, not problems and secs < 60, f"{len(all_subspaces(T, 1)) + len(all_subspaces(T, 2))} subspaces; "
                                           f"problems: {sorted(set(problems)) or 'none'}", secs)
    assert not problems and secs < 60
