"""Fusion systems over small p-groups.

Subgroups of ``S`` are bitmasks over the ids of ``S``. A fusion system is
stored by a list of generating maps ``(domain mask, image array)`` where the
array has length ``|S|`` and ``-1`` off the domain. ``Hom_F(P, S)`` is
computed on demand: starting from the inclusion of ``P``, every map found is
post-composed with each generator (and generator inverse) whose domain
contains its image, until nothing new appears. Morphisms from ``P`` are rows
of an array aligned with the ascending member list of ``P``.

Hom sets of ``F``-conjugate subgroups are transported along a connecting
isomorphism instead of being searched again.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractError, InputError, UnsupportedInputError
from .group_core import (
    FiniteGroup,
    all_subgroups,
    closure_set,
    direct_product_group,
    is_prime,
    is_subgroup_set,
    o_p,
    quotient_group,
    subgroup_as_group,
    sylow,
)

__all__ = [
    "FusionSystem",
    "SubgroupClassification",
    "generate",
    "fusion_from_group",
    "conjugates",
    "is_fully_normalized",
    "classify_subgroup",
    "normalizer_system",
    "o_p_of_fusion",
    "center_of_fusion",
    "direct_product_fusion",
    "induced_morphism_check",
    "quotient_fusion",
    "is_internal_central_product",
    "check_delta_closure",
    "fusion_difference",
    "image_system",
    "overgroup_closure",
    "members_of",
    "mask_of",
    "is_centric",
    "is_radical",
    "is_subcentric",
    "centric_radicals",
    "subcentrics",
    "is_normal_in",
    "InternalFusionReport",
]


def members_of(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(ids: Iterable[int]) -> int:
    m = 0
    for x in ids:
        m |= 1 << int(x)
    return m


def _row_masks(rows: np.ndarray) -> list[int]:
    return [mask_of(r) for r in rows.tolist()]


def _mask_array(n: int, mask: int) -> np.ndarray:
    out = np.zeros(n, dtype=bool)
    out[members_of(mask)] = True
    return out


class FusionSystem:
    """The fusion system on ``S`` generated by ``generators`` and ``Inn(S)``.

    ``embed`` optionally maps the ids of ``S`` into the group of a larger
    system, for systems living on a subgroup (normalizer systems, images).
    """

    def __init__(
        self,
        S: FiniteGroup,
        p: int,
        generators: Sequence[tuple[int, np.ndarray]] = (),
        name: str = "",
        embed: np.ndarray | None = None,
    ):
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        if not S.is_p_group(p):
            raise InputError(f"S of order {S.order} is not a {p}-group")
        self.S = S
        self.p = p
        self.name = name
        self.embed = embed
        self.n = S.order
        inner = [(self.full_mask, S.conj_table[:, s].copy()) for s in _generating_set(S)]
        gens = _dedupe(list(generators) + inner)
        self.generators = [(m, a) for m, a in gens]
        self._moves = self._with_inverses(self.generators)
        self._hom: dict[int, np.ndarray] = {}

    def __repr__(self) -> str:
        return f"FusionSystem({self.name or '?'}, |S|={self.n}, gens={len(self.generators)})"

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @staticmethod
    def _with_inverses(gens: list[tuple[int, np.ndarray]]) -> list[tuple[int, np.ndarray]]:
        out = []
        for dom, arr in gens:
            out.append((dom, arr))
            d = np.array(members_of(dom), dtype=np.intp)
            inv = np.full(arr.size, -1, dtype=np.intp)
            inv[arr[d]] = d
            out.append((mask_of(arr[d]), inv))
        return _dedupe(out)

    @cached_property
    def subgroups(self) -> list[int]:
        """All subgroups of ``S`` as masks, sorted by (order, members)."""
        return [mask_of(H) for H in all_subgroups(self.S)]

    def normalize(self, P: int | Iterable[int]) -> int:
        m = P if isinstance(P, int) else mask_of(P)
        if m >> self.n or not is_subgroup_set(self.S, frozenset(members_of(m))):
            raise InputError("not a subgroup of S")
        return m

    def hom(self, P: int | Iterable[int]) -> np.ndarray:
        """``Hom_F(P, S)`` as rows over the ascending members of ``P``."""
        P = self.normalize(P)
        if P not in self._hom:
            self._search(P)
        return self._hom[P]

    def _search(self, P: int) -> None:
        start = np.array(members_of(P), dtype=np.intp)
        found = {start.tobytes(): start}
        frontier = [start]
        while frontier:
            rows = np.array(frontier)
            masks = _row_masks(rows)
            nxt = []
            for dom, arr in self._moves:
                sel = [i for i, m in enumerate(masks) if m & ~dom == 0]
                if not sel:
                    continue
                for r in arr[rows[sel]]:
                    key = r.tobytes()
                    if key not in found:
                        found[key] = r
                        nxt.append(r)
            frontier = nxt
        rows = np.array(sorted(found.values(), key=lambda r: r.tolist()), dtype=np.intp)
        rows.setflags(write=False)
        self._hom[P] = rows
        # transport to every conjugate along one connecting isomorphism
        for r, m in zip(rows, _row_masks(rows)):
            if m not in self._hom:
                moved = rows[:, np.argsort(r)]
                moved = moved[np.lexsort(moved.T[::-1])]
                moved.setflags(write=False)
                self._hom[m] = moved

    def hom_into(self, P: int | Iterable[int], Q: int | Iterable[int]) -> np.ndarray:
        """``Hom_F(P, Q)``."""
        P, Q = self.normalize(P), self.normalize(Q)
        rows = self.hom(P)
        keep = [i for i, m in enumerate(_row_masks(rows)) if m & ~Q == 0]
        return rows[keep]

    def aut(self, P: int | Iterable[int]) -> np.ndarray:
        P = self.normalize(P)
        return self.hom_into(P, P)

    def conjugates(self, P: int | Iterable[int]) -> frozenset[int]:
        return frozenset(_row_masks(self.hom(P)))

    def centralizer_mask(self, P: int) -> int:
        idx = np.array(members_of(P), dtype=np.intp)
        ok = (self.S.conj_table[idx, :] == idx[:, None]).all(axis=0)
        return mask_of(np.flatnonzero(ok))

    def normalizer_mask(self, P: int) -> int:
        idx = np.array(members_of(P), dtype=np.intp)
        inside = _mask_array(self.n, P)
        ok = inside[self.S.conj_table[idx, :]].all(axis=0)
        return mask_of(np.flatnonzero(ok))

    def contains_map(self, dom: int, arr: np.ndarray) -> bool:
        """Whether the map ``arr`` on ``dom`` lies in ``Hom_F(dom, S)``."""
        row = np.asarray(arr)[members_of(dom)]
        return any(np.array_equal(row, r) for r in self.hom(dom))

    def all_morphisms(self):
        for P in self.subgroups:
            yield P, self.hom(P)


def _generating_set(S: FiniteGroup) -> list[int]:
    gens: list[int] = []
    span = frozenset({0})
    for s in range(S.order):
        if s not in span:
            gens.append(s)
            span = closure_set(S, gens)
    return gens


def _dedupe(gens: list[tuple[int, np.ndarray]]) -> list[tuple[int, np.ndarray]]:
    seen = set()
    out = []
    for dom, arr in gens:
        arr = np.asarray(arr, dtype=np.intp)
        key = (dom, arr.tobytes())
        if key not in seen:
            seen.add(key)
            out.append((dom, arr))
    return out


def _prune_restrictions(gens: list[tuple[int, np.ndarray]]) -> list[tuple[int, np.ndarray]]:
    """Drop generators that are restrictions of another generator."""
    gens = sorted(_dedupe(gens), key=lambda g: -bin(g[0]).count("1"))
    kept: list[tuple[int, np.ndarray]] = []
    for dom, arr in gens:
        d = members_of(dom)
        if any(kd & dom == dom and kd != dom and np.array_equal(ka[d], arr[d]) for kd, ka in kept):
            continue
        kept.append((dom, arr))
    return kept


def _check_seed(S: FiniteGroup, dom: Sequence[int], img: Sequence[int]) -> tuple[int, np.ndarray]:
    dom = [int(x) for x in dom]
    img = [int(y) for y in img]
    if len(dom) != len(img):
        raise InputError("seed map needs one image per domain element")
    if not is_subgroup_set(S, frozenset(dom)):
        raise InputError("seed map domain is not a subgroup")
    if len(set(img)) != len(img):
        raise InputError("seed map is not injective")
    arr = np.full(S.order, -1, dtype=np.intp)
    arr[dom] = img
    d = np.array(dom, dtype=np.intp)
    if (arr[S.table[np.ix_(d, d)]] != S.table[np.ix_(arr[d], arr[d])]).any():
        raise InputError("seed map is not a homomorphism")
    return mask_of(dom), arr


def generate(
    S: FiniteGroup,
    p: int,
    seed_maps: Iterable[dict[int, int] | tuple[Sequence[int], Sequence[int]]] = (),
    name: str = "",
) -> FusionSystem:
    """Least fusion system on ``S`` containing the seeds and inner fusion.

    Seeds are ``{x: xφ}`` dicts or ``(domain, images)`` pairs.
    """
    gens = []
    for seed in seed_maps:
        if isinstance(seed, dict):
            dom, img = list(seed.keys()), list(seed.values())
        else:
            dom, img = seed
        gens.append(_check_seed(S, dom, img))
    return FusionSystem(S, p, gens, name)


def _double_coset_reps(G: FiniteGroup, S: frozenset[int]) -> list[int]:
    reps = []
    seen = np.zeros(G.order, dtype=bool)
    s = np.array(sorted(S), dtype=np.intp)
    for g in range(G.order):
        if seen[g]:
            continue
        reps.append(g)
        left = G.table[s, g]
        seen[G.table[np.ix_(left, s)].ravel()] = True
    return reps


def fusion_from_group(G: FiniteGroup, p: int, S: Iterable[int] | None = None) -> FusionSystem:
    """``F_S(G)`` for a Sylow ``p``-subgroup ``S`` (by default ``sylow(G, p)``)."""
    if G.order % p:
        raise InputError(f"{p} does not divide |G| = {G.order}")
    Sset = sylow(G, p).members if S is None else frozenset(S)
    SG, embed = subgroup_as_group(G, Sset, name=f"S({G.name})" if G.name else "")
    local = np.full(G.order, -1, dtype=np.intp)
    local[embed] = np.arange(embed.size)
    gens = []
    for g in _double_coset_reps(G, Sset):
        images = G.conj_table[embed, g]
        ok = local[images] >= 0
        arr = np.where(ok, local[images], -1)
        gens.append((mask_of(np.flatnonzero(ok)), arr))
    F = FusionSystem(SG, p, _prune_restrictions(gens), name=f"F({G.name})" if G.name else "")
    F.group_embed = embed
    return F


# --- subgroup properties ---------------------------------------------------


def conjugates(F: FusionSystem, P) -> frozenset[int]:
    return F.conjugates(P)


def is_fully_normalized(F: FusionSystem, P) -> bool:
    P = F.normalize(P)
    size = bin(F.normalizer_mask(P)).count("1")
    return all(bin(F.normalizer_mask(Q)).count("1") <= size for Q in F.conjugates(P))


def is_centric(F: FusionSystem, P) -> bool:
    return all(F.centralizer_mask(Q) & ~Q == 0 for Q in F.conjugates(P))


def _perm_group(perms: list[tuple[int, ...]]) -> FiniteGroup:
    k = len(perms[0])
    ident = tuple(range(k))
    perms = [ident] + sorted(set(perms) - {ident})
    pos = {q: i for i, q in enumerate(perms)}
    table = np.empty((len(perms), len(perms)), dtype=np.intp)
    for i, a in enumerate(perms):
        for j, b in enumerate(perms):
            table[i, j] = pos[tuple(b[a[t]] for t in range(k))]
    return FiniteGroup(table, check=False), perms


def is_radical(F: FusionSystem, P) -> bool:
    """``O_p(Aut_F(P)) = Inn(P)``."""
    P = F.normalize(P)
    mem = members_of(P)
    index = {x: i for i, x in enumerate(mem)}
    autos = [tuple(index[y] for y in row) for row in F.aut(P).tolist()]
    A, perms = _perm_group(autos)
    core = {perms[i] for i in o_p(A, F.p).members}
    idx = np.array(mem, dtype=np.intp)
    inner = {tuple(index[int(y)] for y in F.S.conj_table[idx, x]) for x in mem}
    return core == inner


def is_subcentric(F: FusionSystem, P, all_conjugates: bool = False) -> bool:
    """``O_p(N_F(Q))`` is centric for a fully normalized conjugate ``Q``.

    Only the first fully normalized conjugate is examined unless
    ``all_conjugates`` is set; for saturated systems the choice is
    irrelevant.
    """
    P = F.normalize(P)
    fully = [Q for Q in sorted(F.conjugates(P)) if is_fully_normalized(F, Q)]
    for Q in fully if all_conjugates else fully[:1]:
        N = normalizer_system(F, Q)
        core = N.embed[members_of(o_p_of_fusion(N))]
        if not is_centric(F, mask_of(core)):
            return False
    return True


@dataclass(frozen=True)
class SubgroupClassification:
    subgroup: frozenset[int]
    fully_normalized: bool
    centric: bool
    radical: bool
    subcentric: bool

    @property
    def centric_radical(self) -> bool:
        return self.centric and self.radical

    def flags(self) -> dict[str, bool]:
        return {
            "fully_normalized": self.fully_normalized,
            "centric": self.centric,
            "radical": self.radical,
            "centric_radical": self.centric_radical,
            "subcentric": self.subcentric,
        }


def classify_subgroup(F: FusionSystem, P) -> SubgroupClassification:
    P = F.normalize(P)
    return SubgroupClassification(
        frozenset(members_of(P)),
        is_fully_normalized(F, P),
        is_centric(F, P),
        is_radical(F, P),
        is_subcentric(F, P),
    )


def centric_radicals(F: FusionSystem) -> frozenset[int]:
    return frozenset(P for P in F.subgroups if is_centric(F, P) and is_radical(F, P))


def subcentrics(F: FusionSystem) -> frozenset[int]:
    return frozenset(P for P in F.subgroups if is_subcentric(F, P))


# --- derived systems -------------------------------------------------------


def _restrict_to(F: FusionSystem, T: int, gens: list[tuple[int, np.ndarray]], name: str) -> FusionSystem:
    """System on the subgroup ``T`` (relabelled) generated by ``gens``."""
    TG, embed = subgroup_as_group(F.S, members_of(T))
    local = np.full(F.n, -1, dtype=np.intp)
    local[embed] = np.arange(embed.size)
    moved = []
    for dom, arr in gens:
        d = members_of(dom)
        a = np.full(embed.size, -1, dtype=np.intp)
        a[local[d]] = local[arr[d]]
        moved.append((mask_of(local[d]), a))
    return FusionSystem(TG, F.p, _prune_restrictions(moved), name, embed=embed)


def normalizer_system(F: FusionSystem, P) -> FusionSystem:
    """``N_F(P)`` on ``N_S(P)`` for fully normalized ``P``.

    Generated by the ``F``-maps ``φ`` defined on some ``R`` with
    ``P ≤ R ≤ N_S(P)`` and ``Pφ = P``. The result is relabelled; its
    ``embed`` maps back into the ambient ids of ``F``.
    """
    P = F.normalize(P)
    if not is_fully_normalized(F, P):
        raise ContractError("normalizer systems are only formed for fully normalized subgroups")
    N = F.normalizer_mask(P)
    pm = members_of(P)
    gens = []
    for R in F.subgroups:
        if R & P != P or R & ~N:
            continue
        rm = members_of(R)
        pos = [rm.index(x) for x in pm]
        for row in F.hom(R):
            if mask_of(row[pos]) == P:
                arr = np.full(F.n, -1, dtype=np.intp)
                arr[rm] = row
                gens.append((R, arr))
    return _restrict_to(F, N, gens, f"N({F.name})")


def _extends_normalizing(F: FusionSystem, dom: int, arr: np.ndarray, Q: int) -> bool:
    """Does ``arr|dom`` extend to an ``F``-map on ``dom·Q`` fixing ``Q``?"""
    big = mask_of(closure_set(F.S, members_of(dom | Q)))
    bm = members_of(big)
    d = members_of(dom)
    pos_d = [bm.index(x) for x in d]
    pos_q = [bm.index(x) for x in members_of(Q)]
    want = arr[d]
    for row in F.hom(big):
        if np.array_equal(row[pos_d], want) and mask_of(row[pos_q]) == Q:
            return True
    return False


def is_normal_in(F: FusionSystem, Q) -> bool:
    """``F = N_F(Q)``: ``Q ⊴ S`` and every generator extends normalizing ``Q``."""
    Q = F.normalize(Q)
    if F.normalizer_mask(Q) != F.full_mask:
        return False
    return all(_extends_normalizing(F, dom, arr, Q) for dom, arr in F._moves)


def o_p_of_fusion(F: FusionSystem) -> int:
    """Largest subgroup ``Q`` with ``F = N_F(Q)``, as a mask."""
    for Q in sorted(F.subgroups, key=lambda m: (-bin(m).count("1"), members_of(m))):
        if is_normal_in(F, Q):
            return Q
    return 1  # pragma: no cover - the trivial subgroup is always normal


def center_of_fusion(F: FusionSystem) -> int:
    """Elements fixed by every ``F``-map defined on them, as a mask."""
    out = []
    for z in range(F.n):
        C = mask_of(closure_set(F.S, [z]))
        pos = members_of(C).index(z)
        if (F.hom(C)[:, pos] == z).all():
            out.append(z)
    Z = mask_of(out)
    if not is_subgroup_set(F.S, frozenset(out)):  # pragma: no cover - sanity
        raise AssertionError("center of a fusion system is not a subgroup")
    return Z


def direct_product_fusion(F1: FusionSystem, F2: FusionSystem) -> FusionSystem:
    """``F1 × F2`` on ``S1 × S2`` (pair ``(i, j)`` has id ``i·|S2| + j``).

    Generated by ``ψ × id`` and ``id × ψ`` for generators ``ψ`` of the
    factors, which generate the same system as all ``φ1 × φ2``.
    """
    if F1.p != F2.p:
        raise InputError("direct product needs a common prime")
    n1, n2 = F1.n, F2.n
    S = direct_product_group(F1.S, F2.S)
    gens = []
    for dom, arr in F1.generators:
        d = members_of(dom)
        a = np.full(n1 * n2, -1, dtype=np.intp)
        ids = (np.array(d)[:, None] * n2 + np.arange(n2)[None, :]).ravel()
        a[ids] = (arr[d][:, None] * n2 + np.arange(n2)[None, :]).ravel()
        gens.append((mask_of(ids), a))
    for dom, arr in F2.generators:
        d = members_of(dom)
        a = np.full(n1 * n2, -1, dtype=np.intp)
        ids = (np.arange(n1)[:, None] * n2 + np.array(d)[None, :]).ravel()
        a[ids] = (np.arange(n1)[:, None] * n2 + arr[d][None, :]).ravel()
        gens.append((mask_of(ids), a))
    name = f"{F1.name}x{F2.name}" if F1.name and F2.name else ""
    return FusionSystem(S, F1.p, gens, name)


def image_system(F: FusionSystem, target: FiniteGroup, alpha: np.ndarray, name: str = "") -> FusionSystem:
    """The image of ``F`` under an injective homomorphism ``alpha`` into ``target``.

    The result lives on the image subgroup (relabelled, ``embed`` into
    ``target``).
    """
    alpha = np.asarray(alpha, dtype=np.intp)
    img = sorted(set(alpha.tolist()))
    TG, embed = subgroup_as_group(target, img)
    local = np.full(target.order, -1, dtype=np.intp)
    local[embed] = np.arange(embed.size)
    la = local[alpha]
    gens = []
    for dom, arr in F.generators:
        d = members_of(dom)
        a = np.full(embed.size, -1, dtype=np.intp)
        a[la[d]] = la[arr[d]]
        gens.append((mask_of(la[d]), a))
    return FusionSystem(TG, F.p, gens, name, embed=embed)


# --- morphisms of fusion systems -------------------------------------------


def _is_group_hom(S: FiniteGroup, T: FiniteGroup, alpha: np.ndarray) -> bool:
    return bool(np.array_equal(alpha[S.table], T.table[alpha[:, None], alpha[None, :]]))


def _induced_rows(F: FusionSystem, alpha: np.ndarray, P: int) -> tuple[int, np.ndarray | None]:
    """Maps on ``Pα`` induced by ``Hom_F(P, S)``; ``None`` if not well defined."""
    pm = np.array(members_of(P), dtype=np.intp)
    pa = alpha[pm]
    img = sorted(set(pa.tolist()))
    first = np.array([int(np.argmax(pa == q)) for q in img], dtype=np.intp)
    pos = np.searchsorted(img, pa)
    rows = alpha[F.hom(P)]
    induced = rows[:, first]
    if not np.array_equal(induced[:, pos], rows):
        return mask_of(img), None
    return mask_of(img), np.unique(induced, axis=0)


def induced_morphism_check(alpha: Sequence[int], F: FusionSystem, F2: FusionSystem) -> str:
    """``none``, ``morphism``, ``epimorphism`` or ``isomorphism``.

    Every ``Hom_F(P, S)`` is compared with ``Hom_F2(Pα, S2)``; the
    surjectivity part is checked on subgroups containing ``ker α``.
    """
    alpha = np.asarray(alpha, dtype=np.intp)
    if alpha.shape != (F.n,) or not _is_group_hom(F.S, F2.S, alpha):
        return "none"
    K = mask_of(np.flatnonzero(alpha == 0))
    surjective_on_homs = True
    for P in F.subgroups:
        Pa, induced = _induced_rows(F, alpha, P)
        if induced is None:
            return "none"
        target = {r.tobytes() for r in F2.hom(Pa)}
        got = {r.tobytes() for r in induced}
        if not got <= target:
            return "none"
        if P & K == K and got != target:
            surjective_on_homs = False
    if not surjective_on_homs or np.unique(alpha).size != F2.n:
        return "morphism"
    return "isomorphism" if K == 1 else "epimorphism"


def quotient_fusion(F: FusionSystem, Z) -> tuple[FusionSystem, np.ndarray]:
    """``F/Z`` for ``Z ≤ Z(F)``, with the projection ``S → S/Z``.

    Generated by the maps induced on ``P/Z`` by ``Hom_F(P, S)`` for all
    ``P ≥ Z``. Cosets are numbered by their least member.
    """
    Z = F.normalize(Z)
    if Z & ~center_of_fusion(F):
        raise UnsupportedInputError("only quotients by central subgroups are supported")
    QG, proj = quotient_group(F.S, members_of(Z))
    gens = []
    for P in sorted(F.subgroups, key=lambda m: -bin(m).count("1")):
        if P & Z != Z:
            continue
        pm = np.array(members_of(P), dtype=np.intp)
        dom = mask_of(proj[pm])
        for row in F.hom(P):
            a = np.full(QG.order, -1, dtype=np.intp)
            a[proj[pm]] = proj[row]
            gens.append((dom, a))
    name = f"{F.name}/Z" if F.name else ""
    return FusionSystem(QG, F.p, _prune_restrictions(gens), name), proj


def fusion_difference(F1: FusionSystem, F2: FusionSystem) -> tuple | None:
    """First ``(P, map)`` in one system and not the other, else ``None``.

    Both systems must live on the same group table.
    """
    if not np.array_equal(F1.S.table, F2.S.table):
        return ("group tables differ", None)
    for P in F1.subgroups:
        a = {r.tobytes(): r for r in F1.hom(P)}
        b = {r.tobytes(): r for r in F2.hom(P)}
        if a.keys() != b.keys():
            extra = next(iter((a.keys() - b.keys()) or (b.keys() - a.keys())))
            r = a.get(extra, b.get(extra))
            return (members_of(P), r.tolist())
    return None


def _embedded_generators_ok(F: FusionSystem, E: FusionSystem, emb: np.ndarray) -> bool:
    for dom, arr in E.generators:
        d = members_of(dom)
        a = np.full(F.n, -1, dtype=np.intp)
        a[emb[d]] = emb[arr[d]]
        if not F.contains_map(mask_of(emb[d]), a):
            return False
    return True


@dataclass
class InternalFusionReport:
    subsystems: bool
    commute: bool
    generate: bool
    intersection_central: bool
    alpha: str
    verdict: bool
    notes: list[str] = field(default_factory=list)


def is_internal_central_product(
    F: FusionSystem,
    F1: FusionSystem,
    F2: FusionSystem,
    emb1: Sequence[int],
    emb2: Sequence[int],
) -> InternalFusionReport:
    """Is ``F`` the internal central product of the subsystems ``F1``, ``F2``?

    ``emb_i`` maps the ids of ``S_i`` into ``S``. Checks that ``S1`` and
    ``S2`` commute and generate ``S``, that ``S1 ∩ S2`` is central in both
    factors, and that ``(x1, x2) ↦ x1 x2`` induces an epimorphism from
    ``F1 × F2`` onto ``F``. The factor images are then ``F1`` and ``F2``
    by construction of ``emb_i``.
    """
    e1 = np.asarray(emb1, dtype=np.intp)
    e2 = np.asarray(emb2, dtype=np.intp)
    S = F.S
    subsystems = _embedded_generators_ok(F, F1, e1) and _embedded_generators_ok(F, F2, e2)
    commute = bool(np.array_equal(S.table[np.ix_(e1, e2)], S.table[np.ix_(e2, e1)].T))
    s1, s2 = set(e1.tolist()), set(e2.tolist())
    generate = closure_set(S, s1 | s2) == frozenset(range(S.order))
    inter = s1 & s2
    loc1 = {int(x): i for i, x in enumerate(e1)}
    loc2 = {int(x): i for i, x in enumerate(e2)}
    z1 = members_of(center_of_fusion(F1))
    z2 = members_of(center_of_fusion(F2))
    intersection_central = all(loc1[x] in z1 and loc2[x] in z2 for x in inter)
    alpha_kind = "none"
    if commute:
        alpha = S.table[e1[:, None], e2[None, :]].ravel()
        alpha_kind = induced_morphism_check(alpha, direct_product_fusion(F1, F2), F)
    verdict = (
        subsystems
        and commute
        and generate
        and intersection_central
        and alpha_kind in ("epimorphism", "isomorphism")
    )
    return InternalFusionReport(subsystems, commute, generate, intersection_central, alpha_kind, verdict)


def overgroup_closure(F: FusionSystem, Gamma: Iterable[int]) -> frozenset[int]:
    base = [F.normalize(P) for P in Gamma]
    return frozenset(Q for Q in F.subgroups if any(Q & P == P for P in base))


def check_delta_closure(F: FusionSystem, Gamma: Iterable, overgroups: bool = True) -> bool:
    """Closed under ``F``-conjugates (and overgroups in ``S`` if requested)."""
    G = {F.normalize(P) for P in Gamma}
    for P in G:
        if not F.conjugates(P) <= G:
            return False
    if overgroups:
        for Q in F.subgroups:
            if Q not in G and any(Q & P == P for P in G):
                return False
    return True
