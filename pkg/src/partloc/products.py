"""External and internal products of partial groups and localities."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ConstructionError, ContractError, InputError
from .fusion import (
    FusionSystem,
    centric_radicals,
    check_delta_closure,
    is_internal_central_product,
    mask_of,
    members_of,
    overgroup_closure,
    subcentrics,
)
from .group_core import all_subgroups, closure_set, direct_product_group, is_characteristic_p
from .locality import (
    Locality,
    fusion_of_locality,
    is_sublocality,
    normalizer_group,
    sublocality,
    verify_locality,
)
from .morphisms import MapKind, PartialGroupMap, classify
from .partial_group import PartialGroup, centralizer

__all__ = [
    "direct_product_pg",
    "direct_product_locality",
    "inclusions_and_projections",
    "canonical_sublocalities",
    "is_objective_characteristic_p",
    "objective_characteristic_witness",
    "is_linking_locality",
    "InternalProductReport",
    "recognize_internal_product",
    "internal_product_predicates",
    "last_proposition_a_check",
    "pair_id",
    "split_id",
]


def pair_id(L2: PartialGroup | int, f: int, g: int) -> int:
    n2 = L2 if isinstance(L2, int) else L2.n
    return f * n2 + g


def split_id(L2: PartialGroup | int, h: int) -> tuple[int, int]:
    n2 = L2 if isinstance(L2, int) else L2.n
    return divmod(h, n2)


def direct_product_pg(L1: PartialGroup, L2: PartialGroup) -> PartialGroup:
    """``L1 × L2``: a word lies in the domain iff both coordinate words do.

    The pair ``(f, g)`` gets id ``f·|L2| + g``; automaton states pair up
    the same way.
    """
    n1, n2 = L1.n, L2.n
    s2 = L2.n_states
    trans = (L1.trans[:, None, :, None] * s2 + L2.trans[None, :, None, :]).reshape(L1.n_states * s2, n1 * n2)
    accept = (L1.accept[:, None] & L2.accept[None, :]).ravel()
    m1, m2 = L1.mul, L2.mul
    ok = (m1[:, None, :, None] >= 0) & (m2[None, :, None, :] >= 0)
    mul = np.where(ok, m1[:, None, :, None] * n2 + m2[None, :, None, :], -1)
    mul = mul.reshape(n1 * n2, n1 * n2)
    inverse = (L1.inverse[:, None] * n2 + L2.inverse[None, :]).ravel()
    labels = [f"({a},{b})" for a in L1.labels for b in L2.labels]
    pg = PartialGroup(trans, accept, mul, inverse, labels, "direct-product", {"left": L1, "right": L2})
    return pg.reachable_trim()


def inclusions_and_projections(prod: PartialGroup) -> tuple[PartialGroupMap, PartialGroupMap, PartialGroupMap, PartialGroupMap]:
    """``ι1, ι2, π1, π2`` for a product built by :func:`direct_product_pg`."""
    if prod.provenance != "direct-product":
        raise ContractError("inclusions and projections need a direct product")
    L1, L2 = prod.meta["left"], prod.meta["right"]
    n2 = L2.n
    i1 = PartialGroupMap(L1, prod, np.arange(L1.n) * n2, "ι1")
    i2 = PartialGroupMap(L2, prod, np.arange(n2), "ι2")
    h = np.arange(prod.n)
    p1 = PartialGroupMap(prod, L1, h // n2, "π1")
    p2 = PartialGroupMap(prod, L2, h % n2, "π2")
    return i1, i2, p1, p2


def direct_product_locality(
    loc1: Locality,
    loc2: Locality,
    verify: bool = True,
    max_len: int = 4,
    budget: int = 10_000_000,
    seed: int = 42,
) -> Locality:
    """``(L1 × L2, Δ1 * Δ2, S1 × S2)``.

    ``Δ1 * Δ2`` is the set of subgroups of ``S1 × S2`` containing some
    ``P1 × P2`` with ``P_i ∈ Δ_i``.
    """
    if loc1.p != loc2.p:
        raise InputError("direct product of localities needs a common prime")
    pg = direct_product_pg(loc1.pg, loc2.pg)
    n2 = loc2.pg.n
    S = [f * n2 + g for f in loc1.S for g in loc2.S]
    SG = direct_product_group(loc1.S_group, loc2.S_group)
    k2 = loc2.S_group.order
    # S-local ids of the product coincide with the pair encoding of S1 x S2
    blocks = []
    for P1 in loc1.delta:
        a = loc1.s_local[sorted(P1)]
        for P2 in loc2.delta:
            b = loc2.s_local[sorted(P2)]
            blocks.append(mask_of((a[:, None] * k2 + b[None, :]).ravel()))
    minimal = set(blocks)
    s_embed = np.array(sorted(S), dtype=np.intp)
    delta = []
    for H in all_subgroups(SG):
        m = mask_of(H)
        if any(m & b == b for b in minimal):
            delta.append(s_embed[sorted(H)].tolist())
    name = f"{loc1.name}x{loc2.name}" if loc1.name and loc2.name else ""
    loc = Locality(pg, loc1.p, S, delta, name)
    loc.meta = {"factors": (loc1, loc2)}
    if verify:
        rep = verify_locality(loc, max_len, budget, seed)
        if not rep.passed:
            raise ConstructionError("direct product failed locality verification", rep)
    return loc


def canonical_sublocalities(prod: Locality) -> tuple[Locality, Locality]:
    """``(L_i ι_i, Δ_i ι_i, S_i ι_i)`` for both factors of a direct product."""
    loc1, loc2 = prod.meta["factors"]
    n2 = loc2.pg.n
    L1 = [f * n2 for f in range(loc1.pg.n)]
    L2 = list(range(n2))
    d1 = [[f * n2 for f in P] for P in loc1.delta]
    d2 = [list(P) for P in loc2.delta]
    return (
        sublocality(prod, L1, d1, f"{loc1.name}^"),
        sublocality(prod, L2, d2, f"{loc2.name}^"),
    )


def objective_characteristic_witness(loc: Locality) -> frozenset[int] | None:
    """A ``P ∈ Δ`` whose normalizer is not of characteristic ``p``, else ``None``."""
    for P in loc.delta:
        G, _ = normalizer_group(loc, P)
        if not is_characteristic_p(G, loc.p):
            return P
    return None


def is_objective_characteristic_p(loc: Locality) -> bool:
    return objective_characteristic_witness(loc) is None


def is_linking_locality(loc: Locality, F: FusionSystem | None = None) -> bool:
    """``F_S(L)^cr ⊆ Δ`` and objective characteristic ``p``."""
    F = F or fusion_of_locality(loc)
    cr = {loc.from_s_mask(R) for R in centric_radicals(F)}
    return cr <= set(loc.delta) and is_objective_characteristic_p(loc)


# --- internal products -----------------------------------------------------


@dataclass
class InternalProductReport:
    phi_well_defined: bool = False
    c1_holds: bool = False
    c2_holds: bool = False
    d_holds: bool = False
    s_product: bool = False
    delta_shape: bool = False
    delta_image: bool = False
    phi_kind: str = "none"
    kernel: frozenset[int] = frozenset()
    intersection: frozenset[int] = frozenset()
    verdict: str = "none"
    witnesses: dict = field(default_factory=dict)
    exact_legs: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "phi_well_defined": self.phi_well_defined,
            "phi_kind": self.phi_kind,
            "C1": self.c1_holds,
            "C2": self.c2_holds,
            "D": self.d_holds,
            "S=S1S2": self.s_product,
            "delta_shape": self.delta_shape,
            "delta_image": self.delta_image,
            "kernel_size": len(self.kernel),
            "intersection_size": len(self.intersection),
            "exact_legs": self.exact_legs,
            "witnesses": {k: str(v) for k, v in self.witnesses.items()},
        }


def _embedding(loc: Locality, sub: Locality) -> np.ndarray:
    emb = sub.pg.meta.get("embed")
    if emb is None or sub.pg.meta.get("parent") is not loc.pg:
        raise ContractError("factor is not a sublocality built on this locality")
    return np.asarray(emb, dtype=np.intp)


def _product_set(loc: Locality, A: Iterable[int], B: Iterable[int]) -> frozenset[int]:
    a = np.array(sorted(A), dtype=np.intp)
    b = np.array(sorted(B), dtype=np.intp)
    prods = loc.pg.mul[np.ix_(a, b)].ravel()
    return frozenset(int(x) for x in prods if x >= 0)


def _direct_c_checks(L: PartialGroup, ext: PartialGroup, phi: np.ndarray, max_len: int, budget: int) -> tuple[bool, bool, object]:
    """(C1), (C2) on words of length up to ``max_len`` by enumeration."""
    from .partial_group import _word_batches

    rng = np.random.default_rng(0)
    for k in range(1, max_len + 1):
        if ext.n**k > budget or L.n**k > budget:
            break
        images = set()
        for w in _word_batches(ext.n, k, None, rng):
            ok = ext.product_batch(w) >= 0
            w = w[ok]
            img = phi[w]
            prod_ext = phi[ext.product_batch(w)]
            prod_img = L.product_batch(img)
            bad = prod_img != prod_ext
            if bad.any():
                return bool(True), False, ("C2", w[bad][0].tolist())
            images.update(map(tuple, img.tolist()))
        for w in _word_batches(L.n, k, None, rng):
            inD = L.in_domain_batch(w)
            for row in w[inD].tolist():
                if tuple(row) not in images:
                    return False, True, ("C1", row)
    return True, True, None


def recognize_internal_product(
    loc: Locality,
    loc1: Locality,
    loc2: Locality,
    c_check_len: int = 3,
    budget: int = 2_000_000,
    check_sub: bool = True,
) -> InternalProductReport:
    """Is ``loc`` the internal central (or direct) product of ``loc1``, ``loc2``?

    ``φ: L1 × L2 → L, (f, g) ↦ Π(f, g)`` is built on the external product
    and classified exactly. The verdict is ``central`` when ``φ`` is well
    defined and a projection, ``S = S1 S2`` and ``Δ`` consists of the
    overgroups of the products ``P1 P2``; ``direct`` when moreover ``φ`` is
    injective. (C1) and (C2) are also enumerated on short words.
    """
    rep = InternalProductReport()
    e1, e2 = _embedding(loc, loc1), _embedding(loc, loc2)
    if check_sub:
        for sub in (loc1, loc2):
            if not is_sublocality(loc, sub):
                raise ContractError(f"{sub} is not a sublocality")
    pg = loc.pg
    pairs = pg.mul[np.ix_(e1, e2)]
    rep.intersection = frozenset(e1.tolist()) & frozenset(e2.tolist())
    if (pairs < 0).any():
        i, j = np.argwhere(pairs < 0)[0]
        rep.witnesses["well_defined"] = (int(e1[i]), int(e2[j]))
        return rep
    rep.phi_well_defined = True
    ext = direct_product_pg(loc1.pg, loc2.pg)
    phi = pairs.ravel()
    beta = PartialGroupMap(ext, pg, phi, "φ")
    cls = classify(beta)
    rep.phi_kind = str(cls.kind)
    rep.exact_legs.append("phi-classification")
    if cls.witness is not None:
        rep.witnesses["phi"] = cls.witness
    rep.kernel = frozenset(int(h) for h in np.flatnonzero(phi == 0))
    rep.c1_holds, rep.c2_holds, cw = _direct_c_checks(pg, ext, phi, c_check_len, budget)
    if cw is not None:
        rep.witnesses[cw[0]] = cw[1]
    counts = np.bincount(phi, minlength=pg.n)
    rep.d_holds = bool((counts == 1).all())
    S1 = frozenset(int(e1[s]) for s in loc1.S)
    S2 = frozenset(int(e2[s]) for s in loc2.S)
    rep.s_product = _product_set(loc, S1, S2) == loc.S
    gamma = set()
    for P1 in loc1.delta:
        for P2 in loc2.delta:
            gamma.add(_product_set(loc, [int(e1[x]) for x in P1], [int(e2[x]) for x in P2]))
    subs = [loc.from_s_mask(m) for m in loc.s_subgroups]
    expected = {Q for Q in subs if any(P <= Q for P in gamma)}
    rep.delta_shape = expected == set(loc.delta)
    # Δ1*Δ2 pushed through φ
    ext_S = [f * loc2.pg.n + g for f in loc1.S for g in loc2.S]
    blocks = set()
    for P1 in loc1.delta:
        for P2 in loc2.delta:
            blocks.add(frozenset(f * loc2.pg.n + g for f in P1 for g in P2))
    SG = direct_product_group(loc1.S_group, loc2.S_group)
    s_embed = np.array(sorted(ext_S), dtype=np.intp)
    image = set()
    for H in all_subgroups(SG):
        Hc = frozenset(int(x) for x in s_embed[sorted(H)])
        if any(B <= Hc for B in blocks):
            image.add(frozenset(int(phi[h]) for h in Hc))
    rep.delta_image = image == set(loc.delta)
    central = (
        rep.phi_well_defined
        and cls.kind >= MapKind.PROJECTION
        and rep.s_product
        and rep.delta_shape
        and rep.delta_image
    )
    if central:
        rep.verdict = "direct" if cls.kind == MapKind.ISOMORPHISM else "central"
    return rep


def internal_product_predicates(loc: Locality, loc1: Locality, loc2: Locality) -> dict[str, bool]:
    """Commuting factors and the two characteristic-``p`` laws.

    Returns flags for: ``L1 ⊆ C_L(L2)``, ``L2 ⊆ C_L(L1)``, pairwise
    ``fg = gf``, and the equivalences
    ``factors objective char p ⟺ (L1 ∩ L2 ≤ S1 ∩ S2 and L objective char p)``
    and the same with linking localities.
    """
    e1, e2 = _embedding(loc, loc1), _embedding(loc, loc2)
    pg = loc.pg
    l1, l2 = set(e1.tolist()), set(e2.tolist())
    out = {
        "L1_centralizes_L2": l1 <= centralizer(pg, l2),
        "L2_centralizes_L1": l2 <= centralizer(pg, l1),
    }
    fg = pg.mul[np.ix_(e1, e2)]
    gf = pg.mul[np.ix_(e2, e1)].T
    out["pairwise_commute"] = bool(((fg >= 0) & (fg == gf)).all())
    S1 = {int(e1[s]) for s in loc1.S}
    S2 = {int(e2[s]) for s in loc2.S}
    inter_ok = (l1 & l2) <= (S1 & S2)
    obj = is_objective_characteristic_p(loc1) and is_objective_characteristic_p(loc2)
    out["objective_char_p_law"] = obj == (inter_ok and is_objective_characteristic_p(loc))
    link = is_linking_locality(loc1) and is_linking_locality(loc2)
    out["linking_law"] = link == (inter_ok and is_linking_locality(loc))
    return out


@dataclass
class LastPropositionReport:
    delta_closed: bool
    cr_inside: bool
    inside_subcentric: bool
    delta_size: int

    @property
    def passed(self) -> bool:
        return self.delta_closed and self.cr_inside and self.inside_subcentric


def last_proposition_a_check(
    F: FusionSystem,
    F1: FusionSystem,
    F2: FusionSystem,
    emb1: Sequence[int],
    emb2: Sequence[int],
    delta1: Iterable,
    delta2: Iterable,
) -> LastPropositionReport:
    """Object sets of an internal central product of fusion systems.

    Preconditions (checked): ``F`` is the internal central product of
    ``F1`` and ``F2``, and ``F_i^cr ⊆ Δ_i ⊆ F_i^s`` with ``Δ_i`` closed under
    ``F_i``-conjugates and overgroups. Then ``Δ``, the overgroups of the
    products ``P1 P2``, is tested for closure and ``F^cr ⊆ Δ ⊆ F^s``.
    """
    e1 = np.asarray(emb1, dtype=np.intp)
    e2 = np.asarray(emb2, dtype=np.intp)
    if not is_internal_central_product(F, F1, F2, e1, e2).verdict:
        raise ContractError("F is not the internal central product of F1 and F2")
    d1 = {F1.normalize(P) for P in delta1}
    d2 = {F2.normalize(P) for P in delta2}
    for Fi, di in ((F1, d1), (F2, d2)):
        if not (centric_radicals(Fi) <= di <= subcentrics(Fi)):
            raise ContractError("Δ_i must lie between F_i^cr and F_i^s")
        if not check_delta_closure(Fi, di):
            raise ContractError("Δ_i must be closed under F_i-conjugates and overgroups")
    gamma = set()
    for P1 in d1:
        for P2 in d2:
            ids = set(e1[members_of(P1)].tolist()) | set(e2[members_of(P2)].tolist())
            gamma.add(mask_of(closure_set(F.S, ids)))
    delta = overgroup_closure(F, gamma)
    return LastPropositionReport(
        check_delta_closure(F, delta),
        centric_radicals(F) <= delta,
        delta <= subcentrics(F),
        len(delta),
    )
