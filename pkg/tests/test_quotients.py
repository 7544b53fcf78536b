import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from partloc import instances as inst
from partloc.errors import ContractError, InputError, UnsupportedInputError
from partloc.group_core import catalog_group, direct_product_group, quotient_group
from partloc.locality import is_sublocality, verify_locality
from partloc.morphisms import MapKind, classify, kernel
from partloc.products import canonical_sublocalities
from partloc.quotients import (
    canonical_projection_central,
    central_product_fusion_check,
    external_central_product_locality,
    induced_quotient_map,
    projection_transport_checks,
    right_cosets,
)

DIAG = [0, 45]  # (z, z) with z = (13)(24), id 5 in D8


@pytest.fixture(scope="module")
def d8d8():
    src = inst.locality("D8/1 x D8/1")
    q, beta = canonical_projection_central(src, DIAG)
    return src, q, beta


def test_cosets_of_diagonal_centre(d8d8):
    src, q, beta = d8d8
    dec = right_cosets(src.pg, DIAG)
    assert dec.partition and len(dec.maximal) == 32
    assert all(len(C) == 2 for C in dec.cosets)


def test_quotient_golden(d8d8):
    src, q, beta = d8d8
    assert q.pg.n == 32
    assert kernel(beta) == frozenset(DIAG)
    assert len(q.S) == 32
    assert classify(beta).kind == MapKind.PROJECTION


def test_quotient_matches_quotient_group(d8d8):
    src, q, beta = d8d8
    Q, proj = quotient_group(direct_product_group(catalog_group("D8"), catalog_group("D8")), DIAG)
    assert np.array_equal(proj, beta.images)
    assert np.array_equal(q.pg.mul, Q.table)


def test_domains_correspond_on_short_words(d8d8):
    src, q, beta = d8d8
    lift = {c: [f for f in range(src.pg.n) if beta.images[f] == c] for c in range(q.pg.n)}
    for k in (1, 2, 3):
        w = np.array(list(itertools.product(range(q.pg.n), repeat=k)), dtype=np.intp)
        inq = q.pg.in_domain_batch(w)
        # every word has a preimage word in the source domain
        lifted = np.zeros(len(w), dtype=bool)
        for choice in itertools.product(range(2), repeat=k):
            u = np.stack([np.array([lift[c][choice[i]] for c in w[:, i]]) for i in range(k)], axis=1)
            lifted |= src.pg.in_domain_batch(u)
        assert np.array_equal(inq, lifted)
    assert len(w) == 32768


def test_quotient_of_a_partial_group():
    src = inst.locality("S3xS3xC2/T x C2/1")
    Z = inst.locality("S3xS3xC2/T o C2/1").meta["Z"]
    q, beta = canonical_projection_central(src, Z)
    assert q.pg.n == 40
    assert (q.pg.mul < 0).any()
    rng = np.random.default_rng(9)
    for k in (2, 3):
        w = rng.integers(0, src.pg.n, size=(4000, k))
        ok = src.pg.in_domain_batch(w)
        assert q.pg.in_domain_batch(beta.images[w])[ok].all()
        assert np.array_equal(beta.images[src.pg.product_batch(w[ok])], q.pg.product_batch(beta.images[w[ok]]))


def test_non_central_subgroup_is_rejected():
    loc = inst.locality("D8/1")
    with pytest.raises(UnsupportedInputError):
        canonical_projection_central(loc, [0, 1])
    with pytest.raises(InputError):
        canonical_projection_central(loc, [5])


def test_right_cosets_need_partial_normal():
    loc = inst.locality("S4/1")
    with pytest.raises(ContractError):
        right_cosets(loc.pg, [0, 1])


def test_external_central_product_input_checks():
    a = inst.locality("D8/1")
    with pytest.raises(InputError):
        external_central_product_locality(a, a, [0, 8])  # the pair (1, 1_L2): 1 is not central in D8
    with pytest.raises(InputError):
        external_central_product_locality(a, a, [0, 5 * 8])  # (z, 1) lies in L1
    with pytest.raises(InputError):
        external_central_product_locality(a, a, [1])


@pytest.mark.parametrize("cid", sorted(inst.CENTRAL_PRODUCTS))
def test_central_products_are_localities(cid):
    q = inst.locality(cid)
    assert verify_locality(q, 3, 10**6).passed
    for img in q.meta["factor_images"]:
        assert is_sublocality(q, img)


@pytest.mark.parametrize("cid", [c for c in sorted(inst.CENTRAL_PRODUCTS) if not c.startswith("C6@3")])
def test_central_product_fusion(cid):
    q = inst.locality(cid)
    l1, l2 = q.meta["direct"].meta["factors"]
    chk = central_product_fusion_check(l1, l2, q.meta["Z"], q)
    assert chk.passed, chk.difference


def test_centre_outside_s_is_flagged():
    q = inst.locality("C6@3/1 o C6@3/1")
    l1, l2 = q.meta["direct"].meta["factors"]
    assert not q.meta["Z"] <= q.meta["direct"].S
    with pytest.raises(ContractError):
        central_product_fusion_check(l1, l2, q.meta["Z"], q)


@pytest.mark.parametrize("cid", sorted(inst.CENTRAL_PRODUCTS))
def test_induced_map_is_an_isomorphism(cid):
    q = inst.locality(cid)
    a, b = q.meta["factor_images"]
    ext_q, induced, kind = induced_quotient_map(q, a, b)
    assert kind == MapKind.ISOMORPHISM and ext_q.pg.n == q.pg.n


def test_induced_map_needs_a_central_product():
    loc = inst.locality("D8/1")
    from partloc.locality import sublocality

    a = sublocality(loc, list(range(8)), loc.delta)
    with pytest.raises(ContractError):
        induced_quotient_map(loc, a, a)


@pytest.mark.parametrize("cid", sorted(inst.CENTRAL_PRODUCTS))
def test_projection_transport(cid):
    q = inst.locality(cid)
    src, beta = q.meta["direct"], q.meta["projection"]
    rep = projection_transport_checks(src, q, beta, list(canonical_sublocalities(src)), internal_pair=(0, 1))
    assert rep.passed and rep.internal_product == "central"
    assert rep.partial_normal_images and all(rep.partial_normal_images)


def test_transport_needs_a_projection():
    q = inst.locality("D8/1 o D8/1")
    src = q.meta["direct"]
    h1, _ = canonical_sublocalities(src)
    from partloc.products import inclusions_and_projections

    i1 = inclusions_and_projections(src.pg)[0]
    with pytest.raises(ContractError):
        projection_transport_checks(h1, q, i1, [])


@given(st.sampled_from(sorted(inst.CENTRAL_PRODUCTS)), st.data())
def test_projection_commutes_with_products(cid, data):
    q = inst.locality(cid)
    src, beta = q.meta["direct"], q.meta["projection"]
    k = data.draw(st.integers(1, 4))
    w = data.draw(st.lists(st.integers(0, src.pg.n - 1), min_size=k, max_size=k))
    if src.pg.in_domain(w):
        img = [int(beta.images[f]) for f in w]
        assert q.pg.in_domain(img)
        assert q.pg.product(img) == beta.images[src.pg.product(w)]


@given(st.sampled_from(sorted(inst.CENTRAL_PRODUCTS)), st.data())
def test_images_of_objects_are_objects(cid, data):
    q = inst.locality(cid)
    src, beta = q.meta["direct"], q.meta["projection"]
    P = data.draw(st.sampled_from(sorted(src.delta, key=sorted)))
    assert frozenset(int(beta.images[x]) for x in P) in set(q.delta)
