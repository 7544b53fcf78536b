"""Acceptance criteria, one test (or a few) per criterion.

Each test is marked with its criterion number; the terminal summary prints
one ``criterion N: PASS/FAIL`` line per criterion. Runtime bounds are
asserted inside the tests.
"""

import itertools
import subprocess
import sys
import time

import numpy as np
import pytest

from partloc import instances as inst
from partloc.fusion import (
    centric_radicals,
    direct_product_fusion,
    fusion_difference,
    fusion_from_group,
    overgroup_closure,
    subcentrics,
)
from partloc.group_core import CATALOG_NAMES, catalog_group, direct_product_group, quotient_group
from partloc.locality import fusion_of_locality, verify_locality
from partloc.morphisms import kernel
from partloc.partial_group import check_axioms, conjugate_set, pg_from_group, s_sub_g
from partloc.products import (
    canonical_sublocalities,
    inclusions_and_projections,
    is_objective_characteristic_p,
    last_proposition_a_check,
    recognize_internal_product,
)
from partloc.quotients import canonical_projection_central, right_cosets
from partloc.suite import SuiteConfig, report, run_suite

LOCALITIES_S3_S4 = ["S3/1", "S3/C2", "S4/1", "S4/E", "S4/V4", "S4/D8"]
# the direct product of an S4 locality and an S3 locality whose carrier allows
# exhaustive length-4 enumeration (48^4 < 10^7)
PRODUCT = "S4/V4 x S3/C2"
CENTRAL = "D8/1 o D8/1"


def suite_ok(lemmas):
    recs = run_suite(SuiteConfig(only=lemmas, seed=42, budget=10**7, sample_budget=10**5))
    bad = [(r.lemma, r.instance, r.witnesses) for r in recs if r.status == "fail"]
    return recs, bad


# --- 1 ------------------------------------------------------------------------


@pytest.mark.criterion(1, "axiom suite, exhaustive to length 4, negative controls")
def test_criterion_1_axiom_suite():
    start = time.perf_counter()
    targets = [(name, pg_from_group(catalog_group(name))) for name in CATALOG_NAMES]
    assert all(catalog_group(n).order <= 24 for n in CATALOG_NAMES)
    targets += [(iid, inst.locality(iid).pg) for iid in LOCALITIES_S3_S4 + [PRODUCT, CENTRAL]]
    for name, pg in targets:
        rep = check_axioms(pg, 4, 10**7, 42)
        assert rep.exhaustive, name
        assert rep.passed, (name, rep.violations[:3])
    for name, pg in targets:
        bad = check_axioms(inst.corrupt_partial_group(pg), 4, 10**7, 42)
        assert bad.violation_count >= 1, name
    assert time.perf_counter() - start < 60


# --- 2 ------------------------------------------------------------------------


@pytest.mark.criterion(2, "direct-product laws")
def test_criterion_2_direct_product_laws():
    recs, bad = suite_ok(
        [
            "ConjugateDirectProduct",
            "DirectProductCentre",
            "DirectProductsLocalitiesNormalizers",
            "DirectProductsLocalitiesProjections",
        ]
    )
    assert not bad, bad
    for r in recs:
        l1, l2 = inst.locality(r.instance).meta["factors"]
        if max(l1.pg.n, l2.pg.n) <= 48:
            assert r.exhaustive, r
    for pid in sorted(inst.PRODUCTS):
        i1, i2, p1, p2 = inclusions_and_projections(inst.locality(pid).pg)
        assert kernel(p2) == frozenset(i1.images.tolist())
        assert kernel(p1) == frozenset(i2.images.tolist())


# --- 3 ------------------------------------------------------------------------


@pytest.mark.criterion(3, "locality verification, P^g in Δ on the V4 locality of S4")
def test_criterion_3_locality_verification():
    start = time.perf_counter()
    for iid in inst.instance_ids():
        rep = verify_locality(inst.locality(iid), 4, 10**7, 42)
        assert rep.passed, (iid, rep.to_dict())
    loc = inst.locality("S4/V4")
    dset = set(loc.delta)
    checked = 0
    for P in loc.delta:
        for g in range(loc.pg.n):
            if P <= s_sub_g(loc.pg, loc.S, g):
                assert conjugate_set(loc.pg, P, g) in dset
                checked += 1
    assert checked > 0
    assert time.perf_counter() - start < 30


# --- 4 ------------------------------------------------------------------------


@pytest.mark.criterion(4, "F_S(L1 x L2) = F1 x F2, Hom-set exact, |S| = 16")
def test_criterion_4_fusion_equality():
    start = time.perf_counter()
    for pid in (PRODUCT, "S4/1 x S3/1"):
        loc = inst.locality(pid)
        l1, l2 = loc.meta["factors"]
        assert (len(l1.S), len(l2.S), len(loc.S)) == (8, 2, 16)
        F = fusion_of_locality(loc)
        F12 = direct_product_fusion(fusion_of_locality(l1), fusion_of_locality(l2))
        assert fusion_difference(F, F12) is None, pid
    # the group case against the fusion system of S4 x S3 itself
    G = direct_product_group(catalog_group("S4"), catalog_group("S3"))
    F1, F2 = fusion_from_group(catalog_group("S4"), 2), fusion_from_group(catalog_group("S3"), 2)
    S = [int(i) * 6 + int(j) for i in F1.group_embed for j in F2.group_embed]
    assert fusion_difference(fusion_from_group(G, 2, S), direct_product_fusion(F1, F2)) is None
    assert time.perf_counter() - start < 300


# --- 5 ------------------------------------------------------------------------


@pytest.mark.criterion(5, "transfer lemmas for fusion systems")
def test_criterion_5_transfer_lemmas():
    recs, bad = suite_ok(["DirectProductFusionSystems", "CentralQuotient", "EpiConjugates"])
    assert not bad, bad
    assert all(r.exhaustive for r in recs)
    assert any(r.lemma == "CentralQuotient" and r.instance == CENTRAL for r in recs)
    for r in recs:
        if r.lemma == "DirectProductFusionSystems":
            F1, F2, F = inst.fusion_pair(r.instance)
            assert F.n <= 16


# --- 6 ------------------------------------------------------------------------


@pytest.mark.criterion(6, "central quotient of D8 x D8 by the diagonal centre")
def test_criterion_6_central_quotient():
    start = time.perf_counter()
    src = inst.locality("D8/1 x D8/1")
    Z = [0, 5 * 8 + 5]
    q, beta = canonical_projection_central(src, Z)
    dec = right_cosets(src.pg, Z)
    assert dec.partition and all(len(C) == 2 for C in dec.maximal)
    assert q.pg.n == 32
    assert kernel(beta) == frozenset(Z)
    n = 0
    for k in (1, 2, 3):
        # quotient words: in D' iff some preimage word lies in D
        w = np.array(list(itertools.product(range(q.pg.n), repeat=k)), dtype=np.intp)
        lifted = np.zeros(len(w), dtype=bool)
        reps = [sorted(np.flatnonzero(beta.images == c).tolist()) for c in range(q.pg.n)]
        for choice in itertools.product(range(2), repeat=k):
            u = np.array([[reps[c][choice[i]] for i, c in enumerate(row)] for row in w], dtype=np.intp)
            lifted |= src.pg.in_domain_batch(u)
        assert np.array_equal(q.pg.in_domain_batch(w), lifted)
        n = len(w)
        # source words: v in D iff vβ* in D'
        v = np.array(list(itertools.product(range(src.pg.n), repeat=k)), dtype=np.intp)
        assert np.array_equal(src.pg.in_domain_batch(v), q.pg.in_domain_batch(beta.images[v]))
    assert n == 32768
    Q, proj = quotient_group(direct_product_group(catalog_group("D8"), catalog_group("D8")), Z)
    assert np.array_equal(q.pg.mul, Q.table)
    assert time.perf_counter() - start < 10


# --- 7 ------------------------------------------------------------------------


@pytest.mark.criterion(7, "internal product recognition round trip")
def test_criterion_7_recognition():
    for pid in sorted(inst.PRODUCTS):
        loc = inst.locality(pid)
        h1, h2 = canonical_sublocalities(loc)
        assert recognize_internal_product(loc, h1, h2).verdict == "direct", pid
        assert recognize_internal_product(loc, h2, h1).verdict == "direct", pid
    q = inst.locality(CENTRAL)
    a, b = q.meta["factor_images"]
    rep = recognize_internal_product(q, a, b)
    inter = frozenset(a.pg.meta["embed"].tolist()) & frozenset(b.pg.meta["embed"].tolist())
    assert rep.verdict == "central" and len(rep.kernel) == len(inter) == 2
    assert recognize_internal_product(q, b, a).verdict == rep.verdict
    recs, bad = suite_ok(["CentralProductCentralizer", "CentralProductExternalInternal"])
    assert not bad, bad


# --- 8 ------------------------------------------------------------------------


@pytest.mark.criterion(8, "characteristic-p laws")
def test_criterion_8_characteristic_p():
    recs, bad = suite_ok(
        [
            "GroupsDirectProductCharp",
            "DirectProductObjectiveCharp",
            "DirectProductLinkingLocality",
            "InternalCentralProductLinkingLocality",
            "ExternalCentralProductLemma",
        ]
    )
    assert not bad, bad
    pairs = next(r for r in recs if r.lemma == "GroupsDirectProductCharp")
    assert pairs.exhaustive and pairs.checked == 2 * 2 * len(CATALOG_NAMES) ** 2
    # both sides of the product law are exercised
    flags = {is_objective_characteristic_p(inst.locality(p)) for p in inst.PRODUCTS}
    assert flags == {True, False}


# --- 9 ------------------------------------------------------------------------


@pytest.mark.criterion(9, "object sets of the D8 o D8 central product of fusion systems")
def test_criterion_9_last_proposition():
    start = time.perf_counter()
    D8 = catalog_group("D8")
    Q, proj = quotient_group(direct_product_group(D8, D8), [0, 45])
    F, F1 = fusion_from_group(Q, 2), fusion_from_group(D8, 2)
    assert F.n == 32
    e1, e2 = proj[np.arange(8) * 8], proj[np.arange(8)]
    choices = [overgroup_closure(F1, centric_radicals(F1)), subcentrics(F1)]
    for d1 in choices:
        for d2 in choices:
            rep = last_proposition_a_check(F, F1, F1, e1, e2, d1, d2)
            assert rep.delta_closed and rep.cr_inside and rep.inside_subcentric
    recs, bad = suite_ok(["LastProposition"])
    assert not bad and any(r.instance == CENTRAL for r in recs)
    assert time.perf_counter() - start < 300


# --- 10 -----------------------------------------------------------------------


@pytest.mark.criterion(10, "deterministic lemma suite within 15 minutes")
def test_criterion_10_determinism():
    start = time.perf_counter()
    first = report(run_suite(SuiteConfig(seed=42)), "machine")
    in_process = time.perf_counter() - start
    start = time.perf_counter()
    res = subprocess.run(
        [sys.executable, "-m", "partloc.cli", "lemma-suite", "--seed", "42", "--format", "machine"],
        capture_output=True,
        text=True,
        timeout=900,
    )
    fresh = time.perf_counter() - start
    assert res.returncode == 0, res.stderr
    assert res.stdout == first
    assert '"status": "fail"' not in first
    assert in_process < 900 and fresh < 900
