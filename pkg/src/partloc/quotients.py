"""Cosets of partial normal subgroups and central quotients of localities."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ConstructionError, ContractError, InputError, UnsupportedInputError
from .fusion import center_of_fusion, direct_product_fusion, fusion_difference, quotient_fusion
from .locality import Locality, fusion_of_locality, is_sublocality, sublocality, verify_locality
from .morphisms import MapKind, PartialGroupMap, classify, image_partial_subgroup
from .partial_group import PartialGroup, center, is_partial_normal, is_subgroup
from .products import canonical_sublocalities, direct_product_locality, recognize_internal_product

__all__ = [
    "CosetDecomposition",
    "right_cosets",
    "canonical_projection_central",
    "external_central_product_locality",
    "central_product_fusion_check",
    "image_sublocality",
    "projection_transport_checks",
    "induced_quotient_map",
]


@dataclass
class CosetDecomposition:
    """Right cosets ``N f`` (one per element) and the maximal ones."""

    normal: frozenset[int]
    cosets: list[frozenset[int]]
    maximal: list[frozenset[int]]
    partition: bool

    def coset_of(self, f: int) -> frozenset[int]:
        return self.cosets[f]


def right_cosets(L: PartialGroup, N: Iterable[int]) -> CosetDecomposition:
    """``N f = {n f : (n, f) ∈ D}`` for every ``f``; maximal ones should partition ``L``."""
    N = frozenset(int(x) for x in N)
    if not is_partial_normal(L, N):
        raise ContractError("right cosets need a partial normal subgroup")
    rows = L.mul[np.array(sorted(N), dtype=np.intp)]
    cosets = [frozenset(int(x) for x in rows[:, f] if x >= 0) for f in range(L.n)]
    distinct = set(cosets)
    maximal = sorted((C for C in distinct if not any(C < D for D in distinct)), key=min)
    covered = sorted(x for C in maximal for x in C)
    return CosetDecomposition(N, cosets, maximal, covered == list(range(L.n)))


def _check_central(L: PartialGroup, Z: frozenset[int]) -> None:
    if not Z <= center(L):
        raise UnsupportedInputError("only central partial normal subgroups are supported")
    if not is_subgroup(L, Z):
        raise UnsupportedInputError("Z must be a subgroup of the partial group")


def canonical_projection_central(
    loc: Locality,
    Z: Iterable[int],
    name: str = "",
    verify: bool = True,
    max_len: int = 4,
    budget: int = 10_000_000,
    seed: int = 42,
) -> tuple[Locality, PartialGroupMap]:
    """``L / Z`` for a central subgroup ``Z``, with the projection ``β``.

    Cosets are numbered by their least member. Since ``Z`` is central, a
    coset word lies in the quotient domain iff the word of least members
    does, and its product is the coset of that word's product; the quotient
    automaton reads each coset as its least member. ``Δβ`` and ``Sβ`` are
    the images.
    """
    pg = loc.pg
    Z = frozenset(int(z) for z in Z)
    if 0 not in Z:
        raise InputError("Z must contain the identity")
    _check_central(pg, Z)
    zs = np.array(sorted(Z), dtype=np.intp)
    cos = pg.mul[zs]  # column f is Z f (all defined: Z is central)
    if (cos < 0).any():  # pragma: no cover - a central subgroup multiplies everywhere
        raise ConstructionError("Z f is not fully defined")
    least = cos.min(axis=0)
    reps = np.unique(least)
    proj = np.searchsorted(reps, least)
    mul = pg.mul[np.ix_(reps, reps)]
    qmul = np.where(mul >= 0, proj[np.maximum(mul, 0)], -1)
    qinv = proj[pg.inverse[reps]]
    labels = [pg.labels[r] + "Z" for r in reps]
    qpg = PartialGroup(
        pg.trans[:, reps], pg.accept, qmul, qinv, labels, "central-quotient",
        {"source": pg, "projection": proj, "Z": Z},
    ).reachable_trim()
    beta = PartialGroupMap(pg, qpg, proj, "β")
    S = frozenset(int(proj[s]) for s in loc.S)
    delta = [[int(proj[x]) for x in P] for P in loc.delta]
    qloc = Locality(qpg, loc.p, S, delta, name or (f"{loc.name}/Z" if loc.name else ""))
    qloc.meta = {"source": loc, "projection": beta, "Z": Z}
    if verify:
        rep = verify_locality(qloc, max_len, budget, seed)
        if not rep.passed:
            raise ConstructionError("central quotient failed locality verification", rep)
    return qloc, beta


def image_sublocality(target: Locality, beta: PartialGroupMap, sub: Locality, name: str = "") -> Locality:
    """``(L0 β, Δ0 β, S0 β)`` for a sublocality ``sub`` of ``beta.source``."""
    emb = np.asarray(sub.pg.meta["embed"], dtype=np.intp)
    img = beta.images[emb]
    L0 = sorted(set(img.tolist()))
    d0 = [[int(img[x]) for x in P] for P in sub.delta]
    return sublocality(target, L0, d0, name)


def external_central_product_locality(
    loc1: Locality,
    loc2: Locality,
    Z: Iterable[int],
    name: str = "",
    verify: bool = True,
    max_len: int = 4,
    budget: int = 10_000_000,
    seed: int = 42,
    direct: Locality | None = None,
) -> Locality:
    """``(L1 × L2) / Z`` for ``Z`` central in ``L1 × L2`` meeting each factor trivially.

    ``Z`` is given in pair ids ``f·|L2| + g``. A direct product already built
    from ``loc1`` and ``loc2`` may be passed as ``direct``. The result
    records the direct product, the projection and the images of the two
    factors in ``meta``.
    """
    prod = direct
    if prod is None or prod.meta.get("factors") != (loc1, loc2):
        prod = direct_product_locality(loc1, loc2, verify, max_len, budget, seed)
    Z = frozenset(int(z) for z in Z)
    n2 = loc2.pg.n
    if not all(0 <= z < prod.pg.n for z in Z) or 0 not in Z:
        raise InputError("Z must be a set of pair ids containing the identity")
    try:
        _check_central(prod.pg, Z)
    except UnsupportedInputError as exc:
        raise InputError(f"Z = {sorted(Z)} is not a central subgroup of L1 × L2") from exc
    hat1 = {f * n2 for f in range(loc1.pg.n)}
    hat2 = set(range(n2))
    if Z & hat1 != {0} or Z & hat2 != {0}:
        raise InputError("Z must meet both factors trivially")
    qloc, beta = canonical_projection_central(prod, Z, name, verify, max_len, budget, seed)
    h1, h2 = canonical_sublocalities(prod)
    qloc.meta.update(
        {
            "direct": prod,
            "factor_images": (image_sublocality(qloc, beta, h1, "L1β"), image_sublocality(qloc, beta, h2, "L2β")),
        }
    )
    return qloc


@dataclass
class FusionCheck:
    center_ok: bool
    equal: bool
    difference: object = None

    @property
    def passed(self) -> bool:
        return self.center_ok and self.equal


def central_product_fusion_check(
    loc1: Locality, loc2: Locality, Z: Iterable[int], qloc: Locality | None = None
) -> FusionCheck:
    """``Z ≤ Z(F1 × F2)`` and ``F_{S/Z}((L1×L2)/Z) = (F1 × F2)/Z`` Hom-set-exactly.

    ``Z`` is in pair ids and must lie in ``S1 × S2``. A quotient already
    built by :func:`external_central_product_locality` may be passed as
    ``qloc``.
    """
    Z = frozenset(int(z) for z in Z)
    if qloc is None:
        qloc = external_central_product_locality(loc1, loc2, Z, verify=False)
    prod = qloc.meta["direct"]
    if not Z <= prod.S:
        raise ContractError("Z must lie in S1 × S2")
    F = direct_product_fusion(fusion_of_locality(loc1), fusion_of_locality(loc2))
    zmask = prod.to_s_mask(Z)
    center_ok = zmask & center_of_fusion(F) == zmask
    if not center_ok:
        return FusionCheck(False, False)
    FQ, _ = quotient_fusion(F, zmask)
    diff = fusion_difference(fusion_of_locality(qloc), FQ)
    return FusionCheck(True, diff is None, diff)


def induced_quotient_map(loc: Locality, loc1: Locality, loc2: Locality) -> tuple[Locality, PartialGroupMap, MapKind]:
    """``(L1 × L2)/ker φ → L`` for an internal central product; returns its kind.

    For an internal central product the kernel is central in the external
    product and the induced map is an isomorphism of partial groups.
    """
    rep = recognize_internal_product(loc, loc1, loc2, check_sub=False)
    if rep.verdict == "none":
        raise ContractError("not an internal central product")
    ext = direct_product_locality(loc1, loc2, verify=False)
    e1 = np.asarray(loc1.pg.meta["embed"], dtype=np.intp)
    e2 = np.asarray(loc2.pg.meta["embed"], dtype=np.intp)
    phi = loc.pg.mul[np.ix_(e1, e2)].ravel()
    q, beta = canonical_projection_central(ext, rep.kernel, verify=False)
    reps = np.unique(np.asarray(q.pg.meta["projection"]), return_index=True)[1]
    induced = PartialGroupMap(q.pg, loc.pg, phi[reps], "φ̄")
    return q, induced, classify(induced).kind


@dataclass
class TransportReport:
    image_sublocalities: list[bool] = field(default_factory=list)
    restricted_projections: list[bool] = field(default_factory=list)
    partial_normal_images: list[bool] = field(default_factory=list)
    internal_product: str | None = None

    @property
    def passed(self) -> bool:
        ok = all(self.image_sublocalities) and all(self.restricted_projections) and all(self.partial_normal_images)
        return ok and self.internal_product in (None, "central", "direct")

    def to_dict(self) -> dict:
        return {
            "image_sublocalities": self.image_sublocalities,
            "restricted_projections": self.restricted_projections,
            "partial_normal_images": self.partial_normal_images,
            "internal_product": self.internal_product,
            "passed": self.passed,
        }


def projection_transport_checks(
    loc: Locality,
    target: Locality,
    beta: PartialGroupMap,
    subs: Sequence[Locality],
    internal_pair: tuple[int, int] | None = None,
) -> TransportReport:
    """What a projection of localities carries over to its image.

    For every sublocality ``(L0, Δ0, S0)`` in ``subs``: the image triple is a
    sublocality of ``target`` and ``β`` restricted to ``L0`` is a projection
    onto it; if ``L0`` is partial normal in ``L`` its image is partial normal.
    If ``internal_pair`` names two entries of ``subs`` whose internal central
    product is ``loc``, the images are checked to give ``target`` the same way.
    """
    if not beta.classification().at_least(MapKind.PROJECTION):
        raise ContractError("β is not a projection")
    if frozenset(int(beta.images[x]) for x in loc.S) != target.S:
        raise ContractError("β does not map S onto the target S")
    rep = TransportReport()
    images = []
    for sub in subs:
        emb = np.asarray(sub.pg.meta["embed"], dtype=np.intp)
        im = image_sublocality(target, beta, sub)
        images.append(im)
        rep.image_sublocalities.append(is_sublocality(target, im))
        res = image_partial_subgroup(beta, emb.tolist())
        rep.restricted_projections.append(res.domain_equality)
        if is_partial_normal(loc.pg, emb.tolist()):
            rep.partial_normal_images.append(is_partial_normal(target.pg, res.image))
    if internal_pair is not None:
        a, b = internal_pair
        if recognize_internal_product(loc, subs[a], subs[b], check_sub=False).verdict == "none":
            raise ContractError("the named pair does not form an internal central product")
        rep.internal_product = recognize_internal_product(target, images[a], images[b], check_sub=False).verdict
    return rep
