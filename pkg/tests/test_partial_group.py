import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import in_locality_domain, oracle_from_labels
from partloc import instances as inst
from partloc.errors import DomainError, InputError, UndefinedConjugationError
from partloc.group_core import catalog_group
from partloc.partial_group import (
    PartialGroup,
    center,
    centralizer,
    centralizer_equivalences_check,
    check_axioms,
    conj_domain,
    conjugate,
    conjugate_set,
    identity_insertion_check,
    is_partial_normal,
    is_partial_subgroup,
    is_subgroup,
    normalizer,
    pg_from_group,
    s_sub_g,
    sub_partial_group,
)

SMALL = ["S3/1", "S3/C2", "D8/1", "Q8/1", "S4/E", "S3xS3xC2/T", "D8/1 o D8/1", "S3xS3xC2/T o C2/1"]


def lab(L, s):
    return L.labels.index(s)


@pytest.fixture(scope="module")
def s3():
    return pg_from_group(catalog_group("S3"))


def test_group_product_is_table_fold(s3):
    O = oracle_from_labels(s3.labels, "perm")
    a, b = lab(s3, "(12)"), lab(s3, "(13)")
    want = O.mul(O.elements[a], O.elements[b])
    assert O.elements[s3.product([a, b])] == want
    assert s3.labels[s3.product([a, b])] in ("(123)", "(132)")


def test_group_axioms_exhaustive(s3):
    rep = check_axioms(s3, 4, 10**7, 0)
    assert rep.passed and rep.exhaustive
    assert rep.checked_words == sum(6**k for k in range(1, 5))


@pytest.mark.parametrize("iid", SMALL)
def test_constructor_outputs_pass_axioms_exhaustively(iid):
    rep = check_axioms(inst.locality(iid).pg, 4, 10**7, 42)
    assert rep.passed and rep.exhaustive


@pytest.mark.parametrize("iid", ["S3/1", "D8/1", "S3xS3xC2/T"])
def test_corrupted_fixture_is_caught(iid):
    bad = inst.corrupt_partial_group(inst.locality(iid).pg)
    rep = check_axioms(bad, 4, 10**7, 42)
    assert not rep.passed and rep.violation_count >= 1 and rep.violations


def test_sampled_mode_is_flagged():
    L = inst.locality("D8/1 x D8/1").pg
    rep = check_axioms(L, 4, 10**5, 1)
    assert rep.passed and not rep.exhaustive


def test_sampling_is_seeded():
    L = inst.locality("S3xS3xC2/T").pg
    a = check_axioms(L, 4, 5000, 3)
    b = check_axioms(L, 4, 5000, 3)
    assert a.to_dict() == b.to_dict()


def test_ones_word_of_length_five(s3):
    assert s3.in_domain([0] * 5) and s3.product([0] * 5) == 0
    rep = identity_insertion_check(inst.locality("S3xS3xC2/T").pg)
    assert rep.passed


def test_locality_domain_matches_chain_oracle():
    loc = inst.locality("S3xS3xC2/T")
    # the ambient group rebuilt as triples of labelled factors
    S3 = oracle_from_labels(catalog_group("S3").labels, "perm")
    C2 = oracle_from_labels(catalog_group("C2").labels, "cyclic")
    from oracles import OracleGroup

    els = [(S3.elements[a], S3.elements[b], C2.elements[c]) for a in range(6) for b in range(6) for c in range(2)]
    O = OracleGroup(els, lambda x, y: (S3.mul(x[0], y[0]), S3.mul(x[1], y[1]), C2.mul(x[2], y[2])), els[0])
    emb = loc.pg.meta["embed"]
    delta = {frozenset(els[int(emb[x])] for x in P) for P in loc.delta}
    n = loc.pg.n
    for k in (1, 2, 3):
        ws = np.array(list(itertools.product(range(n), repeat=k)))
        if k == 3:
            ws = ws[np.random.default_rng(0).choice(len(ws), 4000, replace=False)]
        got = loc.pg.in_domain_batch(ws)
        want = [in_locality_domain(O, delta, [els[int(emb[x])] for x in w]) for w in ws]
        assert got.tolist() == want
    # the domain is genuinely partial
    assert not loc.pg.pair_defined.all()


def test_conjugation_examples(s3):
    a, g = lab(s3, "(12)"), lab(s3, "(123)")
    assert s3.labels[conjugate(s3, a, g)] == "(23)"
    for x in range(6):
        assert conjugate(s3, 0, x) == 0 and conjugate(s3, x, 0) == x
    S = {0, a}
    assert s_sub_g(s3, S, g) == {0}


def test_conj_domain_of_small_locality():
    L = inst.locality("S3/C2").pg
    assert L.n == 2
    assert conj_domain(L, 1) == {0, 1}


def test_undefined_conjugation_raises():
    L = inst.locality("S3xS3xC2/T").pg
    bad = [(x, g) for x in range(L.n) for g in range(L.n) if L.conj_table[x, g] < 0]
    assert bad
    x, g = bad[0]
    with pytest.raises(UndefinedConjugationError):
        conjugate(L, x, g)
    with pytest.raises(UndefinedConjugationError):
        conjugate_set(L, [0, x], g)
    w = next((a, b) for a in range(L.n) for b in range(L.n) if L.mul[a, b] < 0)
    with pytest.raises(DomainError):
        L.product(w)
    with pytest.raises(InputError):
        L.product([L.n])


def test_centres():
    d8 = pg_from_group(catalog_group("D8"))
    assert len(center(d8)) == 2 and d8.labels[max(center(d8))] == "(13)(24)"
    assert center(pg_from_group(catalog_group("S3"))) == {0}


def test_empty_set_degenerate_cases(s3):
    assert centralizer(s3, []) == set(range(6))
    assert normalizer(s3, []) == set(range(6))


def test_subgroup_predicates(s3):
    H = {0, lab(s3, "(12)")}
    assert is_partial_subgroup(s3, H) and is_subgroup(s3, H)
    assert not is_partial_normal(s3, H)
    assert is_subgroup(s3, {0})
    assert is_partial_normal(s3, {0, lab(s3, "(123)"), lab(s3, "(132)")})
    assert not is_partial_subgroup(s3, {0, lab(s3, "(123)")})


def test_partial_subgroup_that_is_not_a_subgroup():
    L = inst.locality("S3xS3xC2/T").pg
    H = set(range(L.n))
    assert is_partial_subgroup(L, H) and not is_subgroup(L, H)


@pytest.mark.parametrize("iid", ["D8/1 o D8/1", "S3xS3xC2/T", "S3xS3xC2/T o C2/1"])
def test_centralizer_equivalences(iid):
    rep = centralizer_equivalences_check(inst.locality(iid).pg)
    assert rep.passed and rep.checked_words > 0


def test_sub_partial_group_restricts_domain():
    L = inst.locality("S3xS3xC2/T").pg
    H = sorted(normalizer(L, {0, 1}))
    sub = sub_partial_group(L, H)
    emb = sub.meta["embed"]
    for a, b in itertools.product(range(sub.n), repeat=2):
        m = sub.mul[a, b]
        assert (m >= 0) == (L.mul[emb[a], emb[b]] >= 0)
        if m >= 0:
            assert emb[m] == L.mul[emb[a], emb[b]]
    x = next(x for x in range(L.n) if L.mul[x, x] not in (0, x))
    with pytest.raises(InputError):
        sub_partial_group(L, [0, x])


def test_constructor_validates_shapes():
    with pytest.raises(InputError):
        PartialGroup(np.zeros((1, 2), int), [False], np.zeros((2, 2), int), np.zeros(2, int))
    with pytest.raises(InputError):
        PartialGroup(np.zeros((1, 3), int), [True], np.zeros((2, 2), int), np.zeros(2, int))


# --- properties --------------------------------------------------------------

ids_and_sets = st.sampled_from(SMALL).flatmap(
    lambda iid: st.tuples(
        st.just(iid),
        st.lists(st.integers(0, inst.locality(iid).pg.n - 1), max_size=4),
        st.integers(0, inst.locality(iid).pg.n - 1),
    )
)


@given(ids_and_sets)
def test_centralizer_inside_normalizer(case):
    iid, X, _ = case
    L = inst.locality(iid).pg
    assert centralizer(L, X) <= normalizer(L, X)
    assert 0 in centralizer(L, X)


@given(ids_and_sets)
def test_identity_conjugation_laws(case):
    iid, _, g = case
    L = inst.locality(iid).pg
    assert 0 in conj_domain(L, g) and conjugate(L, 0, g) == 0
    assert g in conj_domain(L, 0) and conjugate(L, g, 0) == g


@given(ids_and_sets)
def test_conjugation_injective_on_objects(case):
    iid, _, g = case
    loc = inst.locality(iid)
    Sg = s_sub_g(loc.pg, loc.S, g)
    for P in loc.delta:
        if P <= Sg:
            assert len(conjugate_set(loc.pg, P, g)) == len(P)


@pytest.mark.parametrize("name", ["C2", "C3"])
def test_tiny_groups_can_be_corrupted(name):
    from partloc.instances import corrupt_partial_group
    from partloc.partial_group import pg_from_group

    bad = corrupt_partial_group(pg_from_group(catalog_group(name)))
    assert check_axioms(bad, 3).violation_count >= 1
