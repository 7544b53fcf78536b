import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import (
    OracleGroup,
    conj_set,
    group_hom_sets,
    o_p as oracle_o_p,
    oracle_from_labels,
)
from partloc.errors import ContractError, InputError, UnsupportedInputError
from partloc.fusion import (
    FusionSystem,
    center_of_fusion,
    centric_radicals,
    check_delta_closure,
    classify_subgroup,
    direct_product_fusion,
    fusion_difference,
    fusion_from_group,
    generate,
    induced_morphism_check,
    is_centric,
    is_fully_normalized,
    is_internal_central_product,
    is_radical,
    mask_of,
    members_of,
    normalizer_system,
    o_p_of_fusion,
    overgroup_closure,
    quotient_fusion,
    subcentrics,
)
from partloc.group_core import catalog_group, direct_product_group, quotient_group

KINDS = {"S3": "perm", "S4": "perm", "A4": "perm", "D8": "perm", "Q8": "quaternion", "C4": "cyclic", "C2": "cyclic"}
GROUPS = ["S3", "S4", "A4", "D8", "Q8", "C4"]


def setup(name, p=2):
    G = catalog_group(name)
    O = oracle_from_labels(G.labels, KINDS[name])
    F = fusion_from_group(G, p)
    emb = F.group_embed
    S = frozenset(O.elements[int(x)] for x in emb)
    return G, O, F, emb, S


def to_oracle(O, emb, mask):
    return frozenset(O.elements[int(emb[x])] for x in members_of(mask))


def oracle_homs(O, emb, S):
    return group_hom_sets(O, S)


@pytest.mark.parametrize("name", GROUPS)
def test_hom_sets_match_group_conjugation(name):
    G, O, F, emb, S = setup(name)
    want = oracle_homs(O, emb, S)
    for P in F.subgroups:
        Pset = to_oracle(O, emb, P)
        dom = [int(emb[x]) for x in members_of(P)]
        got = {tuple(sorted(zip(dom, (int(emb[y]) for y in row)))) for row in F.hom(P)}
        assert got == want[(Pset, S)]
        for Q in F.subgroups:
            rows = F.hom_into(P, Q)
            assert len(rows) == len(want.get((Pset, to_oracle(O, emb, Q)), ()))


def oracle_radical(O, P, maps):
    """O_p(Aut_G(P)) = Inn(P), with Aut_G(P) built from conjugation maps."""
    Pl = sorted(P, key=repr)
    autos = {tuple(m[x] for x in Pl) for m in maps}
    pos = {x: i for i, x in enumerate(Pl)}
    ident = tuple(Pl)
    A = OracleGroup(sorted(autos, key=repr), lambda a, b: tuple(b[pos[y]] for y in a), ident)
    inner = {tuple(O.conj(x, g) for x in Pl) for g in P}
    return set(oracle_o_p(A, 2)) == inner


@pytest.mark.parametrize("name", ["S4", "A4", "D8", "Q8", "S3"])
def test_subgroup_flags_match_oracle(name):
    G, O, F, emb, S = setup(name)
    for P in F.subgroups:
        Pset = to_oracle(O, emb, P)
        cls = {conj_set(O, Pset, g) for g in O.elements}
        cls = {Q for Q in cls if Q <= S}
        norm = lambda Q: {s for s in S if conj_set(O, Q, s) == Q}
        cent = lambda Q: {s for s in S if all(O.mul(s, x) == O.mul(x, s) for x in Q)}
        assert is_fully_normalized(F, P) == (len(norm(Pset)) == max(len(norm(Q)) for Q in cls))
        assert is_centric(F, P) == all(cent(Q) <= Q for Q in cls)
        maps = [{x: O.conj(x, g) for x in Pset} for g in O.elements if conj_set(O, Pset, g) == Pset]
        assert is_radical(F, P) == oracle_radical(O, Pset, maps)


def test_s4_fusion_golden():
    G, O, F, emb, S = setup("S4")
    V = [P for P in F.subgroups if len(members_of(P)) == 4 and len(F.aut(P)) == 6]
    assert len(V) == 1
    cr = centric_radicals(F)
    assert V[0] in cr and F.full_mask in cr and len(cr) == 2
    assert o_p_of_fusion(F) == V[0]
    assert to_oracle(O, emb, o_p_of_fusion(F)) == oracle_o_p(O, 2)
    # O_2(F) is centric, so every subgroup is subcentric
    assert subcentrics(F) == frozenset(F.subgroups)
    assert center_of_fusion(F) == 1


@pytest.mark.parametrize("name", GROUPS)
def test_center_matches_oracle(name):
    G, O, F, emb, S = setup(name)
    want = {z for z in S if all(O.conj(z, g) == z for g in O.elements if O.conj(z, g) in S)}
    assert to_oracle(O, emb, center_of_fusion(F)) == want


@pytest.mark.parametrize("name", GROUPS)
def test_centric_implies_subcentric(name):
    F = fusion_from_group(catalog_group(name), 2)
    for P in F.subgroups:
        c = classify_subgroup(F, P)
        assert not c.centric or c.subcentric
        assert c.centric_radical == (c.centric and c.radical)


def test_generate_from_one_automorphism_gives_s4():
    F = fusion_from_group(catalog_group("S4"), 2)
    V = next(P for P in F.subgroups if len(F.aut(P)) == 6)
    m = members_of(V)
    pos = {x: i for i, x in enumerate(m)}

    def twice(r):
        return [int(r[pos[int(x)]]) for x in r]

    r = next(r for r in F.aut(V) if r.tolist() != m and twice(r) != m)
    seed = dict(zip(m, r.tolist()))
    E = generate(F.S, 2, [seed])
    assert fusion_difference(E, F) is None


@pytest.mark.parametrize("name", GROUPS)
def test_generate_is_idempotent(name):
    F = fusion_from_group(catalog_group(name), 2)
    seeds = [(members_of(d), a[members_of(d)].tolist()) for d, a in F.generators]
    E = generate(F.S, 2, seeds)
    assert fusion_difference(E, F) is None
    E2 = generate(E.S, 2, [(members_of(d), a[members_of(d)].tolist()) for d, a in E.generators])
    assert fusion_difference(E2, E) is None


def test_generate_rejects_non_homomorphism():
    S = catalog_group("D8")
    with pytest.raises(InputError):
        generate(S, 2, [{0: 1}])
    with pytest.raises(InputError):
        FusionSystem(catalog_group("S3"), 2)

PAIRS = [("S4", "S3"), ("A4", "C2"), ("D8", "C2"), ("Q8", "C2"), ("S3", "S3")]


@pytest.mark.parametrize("a,b", PAIRS)
def test_product_system_equals_fusion_of_product_group(a, b):
    F1, F2 = fusion_from_group(catalog_group(a), 2), fusion_from_group(catalog_group(b), 2)
    P = direct_product_fusion(F1, F2)
    G = direct_product_group(catalog_group(a), catalog_group(b))
    n2 = catalog_group(b).order
    S = [int(i) * n2 + int(j) for i in F1.group_embed for j in F2.group_embed]
    FG = fusion_from_group(G, 2, S)
    assert np.array_equal(FG.group_embed, np.sort(S))
    # the pair ids of S1 × S2 are ordered like the sorted ids in G1 × G2
    assert fusion_difference(P, FG) is None


@pytest.mark.parametrize("a,b", PAIRS)
def test_center_of_product(a, b):
    F1, F2 = fusion_from_group(catalog_group(a), 2), fusion_from_group(catalog_group(b), 2)
    P = direct_product_fusion(F1, F2)
    want = mask_of(i * F2.n + j for i in members_of(center_of_fusion(F1)) for j in members_of(center_of_fusion(F2)))
    assert center_of_fusion(P) == want


@pytest.mark.parametrize("a,b", [("S4", "S3"), ("D8", "C2")])
def test_box_hom_sets_are_products(a, b):
    F1, F2 = fusion_from_group(catalog_group(a), 2), fusion_from_group(catalog_group(b), 2)
    P = direct_product_fusion(F1, F2)
    n2 = F2.n
    for P1 in F1.subgroups:
        for P2 in F2.subgroups:
            box = mask_of(i * n2 + j for i in members_of(P1) for j in members_of(P2))
            d = members_of(box)
            want = set()
            for r1 in F1.hom(P1):
                m1 = dict(zip(members_of(P1), r1.tolist()))
                for r2 in F2.hom(P2):
                    m2 = dict(zip(members_of(P2), r2.tolist()))
                    want.add(tuple(m1[x // n2] * n2 + m2[x % n2] for x in d))
            assert {tuple(r.tolist()) for r in P.hom(box)} == want


@pytest.mark.parametrize("name", ["D8", "Q8"])
def test_quotient_by_center_matches_quotient_group(name):
    G = catalog_group(name)
    F = fusion_from_group(G, 2)
    ZG = [int(z) for z in range(G.order) if all(G.table[z, g] == G.table[g, z] for g in range(G.order))]
    Zs = [i for i, x in enumerate(F.group_embed) if int(x) in ZG]
    assert len(Zs) == 2
    FQ, proj = quotient_fusion(F, Zs)
    Q, gproj = quotient_group(G, ZG)
    sq = sorted(set(int(gproj[x]) for x in F.group_embed))
    FG = fusion_from_group(Q, 2, sq)
    # the projections agree on S up to the ascending relabelling
    relabel = np.searchsorted(FG.group_embed, gproj[F.group_embed])
    assert np.array_equal(relabel, proj)
    assert fusion_difference(FQ, FG) is None
    assert induced_morphism_check(proj, F, FQ) == "epimorphism"


def test_quotient_of_inner_d8_is_inner_on_four_group():
    F = fusion_from_group(catalog_group("D8"), 2)
    FQ, proj = quotient_fusion(F, center_of_fusion(F))
    assert FQ.n == 4
    assert all(len(FQ.hom(P)) == 1 for P in FQ.subgroups)


def test_quotient_by_non_central_subgroup_is_unsupported():
    F = fusion_from_group(catalog_group("S4"), 2)
    V = o_p_of_fusion(F)
    with pytest.raises(UnsupportedInputError):
        quotient_fusion(F, V)


def test_induced_morphism_kinds():
    F = fusion_from_group(catalog_group("S4"), 2)
    inner = FusionSystem(F.S, 2)
    ident = np.arange(F.n)
    assert induced_morphism_check(ident, F, F) == "isomorphism"
    assert induced_morphism_check(ident, inner, F) == "morphism"
    assert induced_morphism_check(ident, F, inner) == "none"
    assert induced_morphism_check(np.zeros(F.n, dtype=int), F, F) == "morphism"
    bad = ident.copy()
    bad[[1, 2]] = bad[[2, 1]]
    if induced_morphism_check(bad, F, F) != "none":
        assert np.array_equal(F.S.table[bad][:, bad], bad[F.S.table])


def d8_central_product():
    D8 = catalog_group("D8")
    G = direct_product_group(D8, D8)
    Z = [0, 5 * 8 + 5]
    Q, proj = quotient_group(G, Z)
    F = fusion_from_group(Q, 2)
    F1 = fusion_from_group(D8, 2)
    e1 = proj[np.arange(8) * 8]
    e2 = proj[np.arange(8)]
    return F, F1, e1, e2


def test_internal_central_product_of_fusion_systems():
    F, F1, e1, e2 = d8_central_product()
    assert F.n == 32
    rep = is_internal_central_product(F, F1, F1, e1, e2)
    assert rep.verdict and rep.alpha == "epimorphism" and rep.intersection_central


def test_same_factor_twice_is_not_a_central_product():
    F, F1, e1, _ = d8_central_product()
    rep = is_internal_central_product(F, F1, F1, e1, e1)
    assert not rep.verdict and not rep.generate


@pytest.mark.parametrize("name", ["S4", "A4", "D8", "Q8"])
def test_subcentric_and_cr_closure_are_closed(name):
    F = fusion_from_group(catalog_group(name), 2)
    s = subcentrics(F)
    assert check_delta_closure(F, s)
    cl = overgroup_closure(F, centric_radicals(F))
    assert check_delta_closure(F, cl)
    assert centric_radicals(F) <= cl <= s


def test_delta_closure_detects_missing_conjugate():
    F = fusion_from_group(catalog_group("S4"), 2)
    inv = [P for P in F.subgroups if len(members_of(P)) == 2]
    assert not check_delta_closure(F, inv[:1], overgroups=False)
    assert check_delta_closure(F, [F.full_mask])


def test_normalizer_system_needs_fully_normalized():
    F = fusion_from_group(catalog_group("S4"), 2)
    bad = [P for P in F.subgroups if not is_fully_normalized(F, P)]
    assert bad
    with pytest.raises(ContractError):
        normalizer_system(F, bad[0])
    N = normalizer_system(F, o_p_of_fusion(F))
    assert N.n == F.n


@given(st.sampled_from(GROUPS), st.data())
def test_hom_rows_are_injective_and_closed_under_composition(name, data):
    F = fusion_from_group(catalog_group(name), 2)
    P = data.draw(st.sampled_from(F.subgroups))
    rows = {tuple(r.tolist()) for r in F.aut(P)}
    m = members_of(P)
    pos = {x: i for i, x in enumerate(m)}
    for a in rows:
        assert len(set(a)) == len(a)
        for b in rows:
            assert tuple(b[pos[x]] for x in a) in rows


@given(st.sampled_from(GROUPS), st.data())
def test_conjugates_are_image_masks(name, data):
    F = fusion_from_group(catalog_group(name), 2)
    P = data.draw(st.sampled_from(F.subgroups))
    for Q in F.conjugates(P):
        assert P in F.conjugates(Q)
        assert len(F.hom(Q)) == len(F.hom(P))
