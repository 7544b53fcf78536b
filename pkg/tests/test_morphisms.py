import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from partloc import instances as inst
from partloc.errors import ContractError, InputError
from partloc.morphisms import (
    MapKind,
    PartialGroupMap,
    classify,
    compose,
    coverage_witness,
    homomorphism_witness,
    identity_map,
    image_partial_subgroup,
    kernel,
    transport_structure,
)
from partloc.partial_group import is_partial_normal
from partloc.products import canonical_sublocalities, inclusions_and_projections


def brute_is_hom(beta, max_len=3):
    """Words up to ``max_len``: ``v ∈ D`` ⇒ ``vβ* ∈ D'`` with ``Π(v)β = Π(vβ*)``."""
    L, M = beta.source, beta.target
    for k in range(1, max_len + 1):
        for w in itertools.product(range(L.n), repeat=k):
            if L.in_domain(w):
                v = [beta(f) for f in w]
                if not M.in_domain(v) or M.product(v) != beta(L.product(w)):
                    return False
    return True


def brute_covers(beta, max_len=2):
    """Every target word up to ``max_len`` in ``D'`` has a preimage in ``D``."""
    L, M = beta.source, beta.target
    pre = [np.flatnonzero(beta.images == y) for y in range(M.n)]
    for k in range(1, max_len + 1):
        for u in itertools.product(range(M.n), repeat=k):
            if M.in_domain(u) and not any(L.in_domain(w) for w in itertools.product(*(pre[y] for y in u))):
                return False
    return True


@pytest.fixture(scope="module")
def small_product():
    loc = inst.locality("S4/E x C2/1")
    return loc, inclusions_and_projections(loc.pg)


def test_inclusion_is_injective_homomorphism_not_projection(small_product):
    loc, (i1, i2, p1, p2) = small_product
    for iota in (i1, i2):
        c = classify(iota)
        assert c.kind == MapKind.HOMOMORPHISM and c.injective and c.exact


def test_projections_classify_as_projections(small_product):
    _, (_, _, p1, p2) = small_product
    assert classify(p1).kind == MapKind.PROJECTION
    assert classify(p2).kind == MapKind.PROJECTION


def test_kernel_of_projection_is_other_factor(small_product):
    loc, (i1, i2, p1, p2) = small_product
    assert kernel(p2) == i1.image(range(i1.source.n))
    assert kernel(p1) == i2.image(range(i2.source.n))


def test_projection_on_genuinely_partial_product():
    loc = inst.locality("S3xS3xC2/T x C2/1")
    i1, _, p1, p2 = inclusions_and_projections(loc.pg)
    assert classify(p1).kind == MapKind.PROJECTION
    assert classify(p2).kind == MapKind.PROJECTION
    assert classify(i1).kind == MapKind.HOMOMORPHISM
    assert brute_is_hom(i1, 2) and brute_covers(p1, 2)


def test_central_projection_has_kernel_z():
    q = inst.locality("D8/1 o D8/1")
    beta = q.meta["projection"]
    assert classify(beta).kind == MapKind.PROJECTION
    assert kernel(beta) == q.meta["Z"]


def test_image_of_factor_sylow_is_partial_subgroup():
    q = inst.locality("D8/1 o D8/1")
    prod, beta = q.meta["direct"], q.meta["projection"]
    h1, _ = canonical_sublocalities(prod)
    S1 = [int(h1.pg.meta["embed"][s]) for s in h1.S]
    res = image_partial_subgroup(beta, S1)
    assert res.is_partial_subgroup and res.domain_equality


def test_projection_image_of_partial_normal_is_partial_normal(small_product):
    loc, (i1, _, p1, _) = small_product
    N = sorted(i1.image(range(i1.source.n)))
    assert is_partial_normal(loc.pg, N)
    assert is_partial_normal(p1.target, p1.image(N))


def test_non_homomorphism_has_valid_witness():
    L = inst.locality("S3xS3xC2/T").pg
    images = np.arange(L.n)
    images[[1, 2]] = images[[2, 1]]
    beta = PartialGroupMap(L, L, images)
    w, why = homomorphism_witness(beta)
    assert L.in_domain(w)
    v = [beta(f) for f in w]
    assert not L.in_domain(v) or L.product(v) != beta(L.product(w))
    assert classify(beta).kind == MapKind.NONE


def test_classification_agrees_with_bounded_brute_force():
    for iid in ("S3/1", "S3/C2", "D8/1"):
        L = inst.locality(iid).pg
        assert brute_is_hom(identity_map(L))
        assert classify(identity_map(L)).kind == MapKind.ISOMORPHISM
    L = inst.locality("D8/1").pg
    trivial = PartialGroupMap(L, L, np.zeros(L.n, dtype=int))
    assert brute_is_hom(trivial)
    assert classify(trivial).kind == MapKind.HOMOMORPHISM
    assert coverage_witness(trivial) is not None


def test_invalid_maps_rejected():
    L = inst.locality("S3/1").pg
    with pytest.raises(InputError):
        PartialGroupMap(L, L, [0, 1])
    with pytest.raises(InputError):
        PartialGroupMap(L, L, [0, 1, 2, 3, 4, 6])
    with pytest.raises(ContractError):
        PartialGroupMap(L, L, np.zeros(L.n, dtype=int)).inverse()
    beta = PartialGroupMap(L, L, np.zeros(L.n, dtype=int))
    assert not beta.images.flags.writeable
    with pytest.raises(InputError):
        transport_structure(L, [1, 0, 2, 3, 4, 5])


# --- properties --------------------------------------------------------------

ISO_IDS = ["S3/1", "D8/1", "S3xS3xC2/T", "S3xS3xC2/T o C2/1", "D8/1 o D8/1"]


@given(st.sampled_from(ISO_IDS), st.randoms(use_true_random=False))
def test_relabelled_copy_is_isomorphic_and_inverse_too(iid, rnd):
    L = inst.locality(iid).pg
    rest = list(range(1, L.n))
    rnd.shuffle(rest)
    M, sigma = transport_structure(L, [0] + rest)
    assert classify(sigma).kind == MapKind.ISOMORPHISM
    assert classify(sigma.inverse()).kind == MapKind.ISOMORPHISM
    assert compose(sigma, sigma.inverse()).images.tolist() == list(range(L.n))


@given(st.sampled_from(["S4/E x C2/1", "S3xS3xC2/T x C2/1", "D8/1 x C6/1"]), st.sampled_from([1, 2]))
def test_kernels_are_partial_normal(iid, i):
    loc = inst.locality(iid)
    beta = inclusions_and_projections(loc.pg)[1 + i]
    assert is_partial_normal(loc.pg, kernel(beta))


def test_composite_of_projections_is_projection():
    q = inst.locality("S3xS3xC2/T o C2/1")
    prod, beta = q.meta["direct"], q.meta["projection"]
    # L1 x L2 -> (L1 x L2)/Z -> its relabelled copy
    M, sigma = transport_structure(q.pg, [0] + list(range(q.pg.n - 1, 0, -1)))
    assert classify(compose(beta, sigma)).kind == MapKind.PROJECTION
    _, _, p1, _ = inclusions_and_projections(prod.pg)
    l1 = prod.meta["factors"][0].pg
    M1, s1 = transport_structure(l1, [0] + list(range(l1.n - 1, 0, -1)))
    assert classify(compose(p1, s1)).kind == MapKind.PROJECTION
