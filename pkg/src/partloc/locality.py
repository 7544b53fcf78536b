"""Localities ``(L, Δ, S)``.

``Δ`` is stored as a sorted tuple of member sets (carrier ids). Besides the
partial group, a locality caches ``S`` as a finite group whose ids are the
ranks of the members of ``S`` in the carrier, so fusion systems extracted
from localities with equal ``S`` labelling are directly comparable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import ConstructionError, ContractError, InputError
from .fusion import FusionSystem, _prune_restrictions, mask_of, members_of
from .group_core import FiniteGroup, all_subgroups, closure_set, is_prime, p_part, subgroup_sort_key, sylow
from .group_core import subgroup_as_group as group_subgroup
from .morphisms import PartialGroupMap, coverage_witness, homomorphism_witness
from .partial_group import (
    AxiomReport,
    PartialGroup,
    _length_plan,
    _word_batches,
    is_partial_subgroup,
    is_subgroup,
    normalizer,
    sub_partial_group,
    subgroup_as_group,
)

__all__ = [
    "Locality",
    "DeltaWitness",
    "LocalityReport",
    "dd_membership",
    "verify_locality",
    "locality_from_group",
    "normalizer_group",
    "fusion_of_locality",
    "is_sublocality",
    "sublocality",
    "delta_sort",
]


def delta_sort(sets: Iterable[Iterable[int]]) -> tuple[frozenset[int], ...]:
    return tuple(sorted({frozenset(int(x) for x in P) for P in sets}, key=subgroup_sort_key))


class Locality:
    """A partial group with a ``p``-subgroup ``S`` and object set ``Δ``.

    Construction does not verify the locality axioms; use
    :func:`verify_locality` (the constructors in this library do).
    """

    def __init__(self, pg: PartialGroup, p: int, S: Iterable[int], delta: Iterable[Iterable[int]], name: str = ""):
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        self.pg = pg
        self.p = p
        self.S = frozenset(int(s) for s in S)
        self.delta = delta_sort(delta)
        self.name = name
        self.meta: dict = {}
        if not self.delta:
            raise InputError("Δ must be non-empty")
        for P in self.delta:
            if not P <= self.S:
                raise InputError("every member of Δ must lie in S")
        if not all(0 <= s < pg.n for s in self.S):
            raise InputError("S is not inside the carrier")

    def __repr__(self) -> str:
        return f"Locality({self.name or self.pg.provenance}, |L|={self.pg.n}, |S|={len(self.S)}, |Δ|={len(self.delta)})"

    @cached_property
    def s_embed(self) -> np.ndarray:
        """``s_embed[i]`` is the carrier id of the ``i``-th smallest member of ``S``."""
        return np.array(sorted(self.S), dtype=np.intp)

    @cached_property
    def s_local(self) -> np.ndarray:
        """Carrier id -> index in ``S`` (``-1`` outside ``S``)."""
        out = np.full(self.pg.n, -1, dtype=np.intp)
        out[self.s_embed] = np.arange(self.s_embed.size)
        return out

    @cached_property
    def S_group(self) -> FiniteGroup:
        G, _ = subgroup_as_group(self.pg, self.S, name=f"S({self.name})" if self.name else "")
        return G

    def to_s_mask(self, P: Iterable[int]) -> int:
        return mask_of(self.s_local[list(P)])

    def from_s_mask(self, m: int) -> frozenset[int]:
        return frozenset(int(x) for x in self.s_embed[members_of(m)])

    @cached_property
    def delta_masks(self) -> frozenset[int]:
        return frozenset(self.to_s_mask(P) for P in self.delta)

    def in_delta(self, P: Iterable[int]) -> bool:
        return frozenset(P) in set(self.delta)

    @cached_property
    def _dd_tables(self):
        """Conjugation on ``S``-indices (``k`` = left ``S``) and a Δ-mask test."""
        k = self.s_embed.size
        conj = self.pg.conj_table[self.s_embed]
        local = np.where(self.s_local >= 0, self.s_local, k)
        table = np.full((k + 1, self.pg.n), k, dtype=np.intp)
        table[:k] = np.where(conj >= 0, local[conj], k)
        dm = np.array(sorted(self.delta_masks), dtype=np.uint64)
        if k <= 22:
            flags = np.zeros(1 << k, dtype=bool)
            flags[dm.astype(np.intp)] = True
            return table, lambda x: flags[x.astype(np.intp)]
        return table, lambda x: np.isin(x, dm)

    @cached_property
    def _dd_dfa(self, cap: int = 4096):
        """Automaton on position tuples of ``S`` under conjugation (or ``None`` past ``cap``)."""
        table, _ = self._dd_tables
        k = self.s_embed.size
        start = np.arange(k, dtype=np.intp)
        index = {start.tobytes(): 0}
        tuples = [start]
        rows = []
        i = 0
        while i < len(tuples):
            nxt = table[tuples[i][:, None], np.arange(self.pg.n)[None, :]].T
            row = np.empty(self.pg.n, dtype=np.intp)
            for f in range(self.pg.n):
                key = nxt[f].tobytes()
                j = index.get(key)
                if j is None:
                    if len(tuples) >= cap:
                        return None
                    j = index[key] = len(tuples)
                    tuples.append(nxt[f].copy())
                row[f] = j
            rows.append(row)
            i += 1
        return np.array(tuples), np.array(rows)

    @cached_property
    def s_subgroups(self) -> list[int]:
        return [mask_of(H) for H in all_subgroups(self.S_group)]


@dataclass(frozen=True)
class DeltaWitness:
    """Chain ``P_0, ..., P_n`` in ``Δ`` with ``P_{i-1}^{f_i} = P_i``."""

    chain: tuple[frozenset[int], ...]


def dd_membership(loc: Locality, w: Sequence[int]) -> DeltaWitness | None:
    """Witness that ``w ∈ D_Δ``, or ``None``.

    Follows every element of ``S`` along the word by conjugation in the
    partial group, keeping those that stay defined and inside ``S``. The
    survivors form ``S_w``; ``w ∈ D_Δ`` iff ``S_w`` (and with it every
    conjugate in the chain) lies in ``Δ``.
    """
    conj = loc.pg.conj_table
    inS = loc.s_local >= 0
    start = loc.s_embed.copy()
    cur = start.copy()
    alive = np.ones(cur.size, dtype=bool)
    steps = []
    for f in w:
        nxt = conj[cur, int(f)]
        alive &= (nxt >= 0) & inS[np.maximum(nxt, 0)]
        cur = np.where(alive, nxt, 0)
        steps.append(cur.copy())
    origin = frozenset(int(x) for x in start[alive])
    chain = [origin] + [frozenset(int(x) for x in c[alive]) for c in steps]
    dset = set(loc.delta)
    if all(P in dset for P in chain):
        return DeltaWitness(tuple(chain))
    return None


def _dd_batch_direct(loc: Locality, words: np.ndarray) -> np.ndarray:
    k = loc.s_embed.size
    table, lookup = loc._dd_tables
    m = words.shape[0]
    cur = np.broadcast_to(np.arange(k, dtype=np.intp), (m, k))
    steps = []
    for j in range(words.shape[1]):
        cur = table[cur, words[:, j][:, None]]
        steps.append(cur)
    alive = cur < k
    bits = _bits(k)
    # or, not sum: on a corrupted table conjugation need not be injective
    ok = lookup(np.bitwise_or.reduce(bits[:k][None, :] * alive, axis=1))
    for c in steps:
        ok &= lookup(np.bitwise_or.reduce(bits[c] * alive, axis=1))
    return ok


def _bits(k: int) -> np.ndarray:
    bits = np.zeros(k + 1, dtype=np.uint64)
    bits[:k] = np.left_shift(np.uint64(1), np.arange(k, dtype=np.uint64))
    return bits


def _dd_batch(loc: Locality, words: np.ndarray) -> np.ndarray:
    """Vectorised :func:`dd_membership` over rows of ``words``.

    Positions of the elements of ``S`` after a prefix depend on the prefix
    only, so they are tracked as states of a small automaton; the chain
    test then runs once per distinct (step state, final state) pair.
    """
    dfa = loc._dd_dfa
    if dfa is None:
        return _dd_batch_direct(loc, words)
    tuples, trans = dfa
    k = loc.s_embed.size
    _, lookup = loc._dd_tables
    bits = _bits(k)
    N = tuples.shape[0]
    cur = np.zeros(words.shape[0], dtype=np.intp)
    path = [cur]
    for j in range(words.shape[1]):
        cur = trans[cur, words[:, j]]
        path.append(cur)
    final = cur
    ok = np.ones(words.shape[0], dtype=bool)
    for st in path:
        codes, inv = np.unique(st * N + final, return_inverse=True)
        alive = tuples[codes % N] < k
        masks = np.bitwise_or.reduce(bits[tuples[codes // N]] * alive, axis=1)
        ok &= lookup(masks)[inv.ravel()]
    return ok


@dataclass
class LocalityReport:
    structure: list[str] = field(default_factory=list)
    l1: list[tuple] = field(default_factory=list)
    l2: AxiomReport = field(default_factory=AxiomReport)
    l3: list[tuple] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not (self.structure or self.l1 or self.l3) and self.l2.passed

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "structure": self.structure,
            "L1": [list(map(str, v)) for v in self.l1[:20]],
            "L2": self.l2.to_dict(),
            "L3": [list(map(str, v)) for v in self.l3[:20]],
        }


def _closure_partial(pg: PartialGroup, X: set[int]) -> frozenset[int]:
    """Close ``X`` under inverses and defined binary products."""
    members = set(X) | {0} | {int(pg.inverse[x]) for x in X}
    frontier = list(members)
    while frontier:
        idx = np.array(sorted(members), dtype=np.intp)
        fr = np.array(frontier, dtype=np.intp)
        prods = np.concatenate([pg.mul[np.ix_(fr, idx)].ravel(), pg.mul[np.ix_(idx, fr)].ravel()])
        new = {int(x) for x in np.unique(prods) if x >= 0} - members
        new |= {int(pg.inverse[x]) for x in new} - members
        members |= new
        frontier = list(new)
    return frozenset(members)


def _check_l1(loc: Locality) -> list[tuple]:
    """``S`` is a maximal ``p``-subgroup.

    A ``p``-subgroup ``P > S`` has ``N_P(S) > S``, so some single ``g ∉ S``
    together with ``S`` already generates a ``p``-subgroup other than ``S``.
    Scanning every ``g`` outside ``S`` is therefore exact.
    """
    pg = loc.pg
    out = []
    for g in range(pg.n):
        if g in loc.S:
            continue
        C = _closure_partial(pg, set(loc.S) | {g})
        if p_part(len(C), loc.p) == len(C) and is_subgroup(pg, C):
            out.append(("L1", g, len(C)))
    return out


def _check_l3(loc: Locality) -> list[tuple]:
    """Conjugates of ``Δ``-members into ``S`` and their overgroups lie in ``Δ``."""
    conj = loc.pg.conj_table
    inS = loc.s_local >= 0
    dm = loc.delta_masks
    subs = loc.s_subgroups
    out = []
    for Q in subs:
        if Q in dm:
            continue
        for P in dm:
            if P & Q == P:
                out.append(("L3-overgroup", sorted(loc.from_s_mask(Q))))
                break
    seen = set()
    for P in loc.delta:
        idx = np.array(sorted(P), dtype=np.intp)
        block = conj[idx, :]
        ok = (block >= 0).all(axis=0) & inS[np.maximum(block, 0)].all(axis=0)
        for g in np.flatnonzero(ok):
            m = loc.to_s_mask(block[:, g])
            if m not in dm and m not in seen:
                seen.add(m)
                out.append(("L3-conjugate", sorted(P), int(g)))
    return out


def verify_locality(
    loc: Locality, max_len: int = 4, budget: int = 10_000_000, seed: int = 42
) -> LocalityReport:
    """Check ``S`` and ``Δ`` and the axioms L1 (maximality), L2 and L3.

    L1 and L3 are finite scans and exact. L2 compares the automaton domain
    with the chain characterisation on every word up to ``max_len`` (sampled
    beyond ``budget`` as in :func:`check_axioms`).
    """
    rep = LocalityReport()
    pg = loc.pg
    if not is_subgroup(pg, loc.S):
        rep.structure.append("S is not a subgroup of L")
        return rep
    if p_part(len(loc.S), loc.p) != len(loc.S):
        rep.structure.append("S is not a p-group")
    for P in loc.delta:
        if not is_subgroup(pg, P):
            rep.structure.append(f"Δ member {sorted(P)} is not a subgroup")
    rep.l1 = _check_l1(loc)
    rep.l3 = _check_l3(loc)
    plan, exhaustive = _length_plan(pg.n, max_len, budget)
    rep.l2.exhaustive = exhaustive
    rng = np.random.default_rng(seed)
    for k, size in sorted(plan.items()):
        for batch in _word_batches(pg.n, k, size, rng):
            rep.l2.checked_words += batch.shape[0]
            bad = pg.in_domain_batch(batch) != _dd_batch(loc, batch)
            rep.l2.add("L2", batch[bad], int(bad.sum()))
    return rep


# --- construction from a group ---------------------------------------------


def _delta_closure(G: FiniteGroup, S: frozenset[int], gens: Iterable[Iterable[int]]) -> tuple[frozenset[int], ...]:
    """Subgroups of ``S`` containing a ``G``-conjugate of some generator."""
    conj = G.conj_table
    SG, embed = group_subgroup(G, S)
    subs = all_subgroups(SG)
    subs = [frozenset(int(x) for x in embed[list(H)]) for H in subs]
    inS = np.zeros(G.order, dtype=bool)
    inS[list(S)] = True
    minimal: set[frozenset[int]] = set()
    for P in gens:
        idx = np.array(sorted(set(P)), dtype=np.intp)
        if idx.size == 0 or not 0 <= idx.min() or idx.max() >= G.order:
            raise InputError("Δ generator has out-of-range ids")
        if closure_set(G, idx.tolist()) != frozenset(idx.tolist()):
            raise InputError(f"Δ generator {sorted(idx.tolist())} is not a subgroup")
        block = conj[idx, :]
        for g in np.flatnonzero(inS[block].all(axis=0)):
            minimal.add(frozenset(int(x) for x in block[:, g]))
    return delta_sort(Q for Q in subs if any(P <= Q for P in minimal))


def locality_from_group(
    G: FiniteGroup,
    p: int,
    delta_generators: Iterable[Iterable[int]],
    name: str = "",
    verify: bool = True,
    max_len: int = 4,
    budget: int = 10_000_000,
    seed: int = 42,
) -> Locality:
    """``L_Δ(G)``: the words of ``G`` conjugating a chain of ``Δ``-members.

    ``S = sylow(G, p)``; ``Δ`` is the set of subgroups of ``S`` containing a
    ``G``-conjugate of a generator; the carrier is ``{g : S_g ∈ Δ}`` with
    ``S_g = S ∩ S^{g^-1}``. Carrier ids are the ranks of the ``G``-ids, and
    ``pg.meta['embed']`` maps them back to ``G``.
    """
    if not is_prime(p) or G.order % p:
        raise InputError(f"{p} must be a prime dividing |G| = {G.order}")
    S = sylow(G, p).members
    delta = _delta_closure(G, S, delta_generators)
    if not delta:
        raise InputError("no conjugate of a Δ generator lies in the Sylow subgroup")
    dset = set(delta)
    conj = G.conj_table
    inS = np.zeros(G.order, dtype=bool)
    inS[list(S)] = True
    s_idx = np.array(sorted(S), dtype=np.intp)

    def step(T: frozenset[int], f: int) -> frozenset[int]:
        idx = np.array(sorted(T), dtype=np.intp)
        img = conj[idx, f]
        return frozenset(int(x) for x in img[inS[img]])

    carrier = [g for g in range(G.order) if step(S, g) in dset]
    # S_g for a letter g is the preimage of step(S, g); the set above is
    # the image, which lies in Δ iff the preimage does
    embed = np.array(carrier, dtype=np.intp)
    local = np.full(G.order, -1, dtype=np.intp)
    local[embed] = np.arange(embed.size)
    n = embed.size
    states: dict[frozenset[int], int] = {S: 0}
    order = [S]
    rows = []
    i = 0
    while i < len(order):
        T = order[i]
        row = np.empty(n, dtype=np.intp)
        for a, g in enumerate(embed):
            T2 = step(T, int(g))
            if T2 not in dset:
                row[a] = -1
                continue
            if T2 not in states:
                states[T2] = len(order)
                order.append(T2)
            row[a] = states[T2]
        rows.append(row)
        i += 1
    dead = len(order)
    trans = np.vstack(rows + [np.full(n, dead, dtype=np.intp)])
    trans[trans < 0] = dead
    accept = np.ones(dead + 1, dtype=bool)
    accept[dead] = False
    two = trans[trans[0]]  # state after (a, b) at [a, b]
    prod = G.table[np.ix_(embed, embed)]
    mul = np.where(accept[two], local[prod], -1)
    if (mul[accept[two]] < 0).any():  # pragma: no cover - closure property
        raise ConstructionError("product of a domain pair left the carrier")
    labels = [G.labels[g] for g in embed]
    pg = PartialGroup(trans, accept, mul, local[G.inverse[embed]], labels, "locality-from-group", {"group": G, "embed": embed})
    loc = Locality(
        pg,
        p,
        local[s_idx],
        [local[sorted(P)] for P in delta],
        name=name or (f"L({G.name})" if G.name else ""),
    )
    if verify:
        rep = verify_locality(loc, max_len, budget, seed)
        if not rep.passed:
            raise ConstructionError("constructed triple is not a locality", rep)
    return loc


def normalizer_group(loc: Locality, P: Iterable[int]) -> tuple[FiniteGroup, np.ndarray]:
    """``N_L(P)`` for ``P ∈ Δ`` as a finite group, with its embedding."""
    P = frozenset(P)
    if P not in set(loc.delta):
        raise InputError("normalizer groups are only formed for members of Δ")
    return subgroup_as_group(loc.pg, normalizer(loc.pg, P))


def fusion_of_locality(loc: Locality) -> FusionSystem:
    """``F_S(L)``: generated by ``c_g: S_g → S`` for ``g`` in the carrier."""
    conj = loc.pg.conj_table
    sl = loc.s_local
    inS = sl >= 0
    gens = []
    for g in range(loc.pg.n):
        col = conj[loc.s_embed, g]
        ok = (col >= 0) & inS[np.maximum(col, 0)]
        arr = np.full(loc.s_embed.size, -1, dtype=np.intp)
        arr[ok] = sl[col[ok]]
        gens.append((mask_of(np.flatnonzero(ok)), arr))
    name = f"F({loc.name})" if loc.name else ""
    return FusionSystem(loc.S_group, loc.p, _prune_restrictions(gens), name)


# --- sublocalities ---------------------------------------------------------


def sublocality(loc: Locality, L0: Iterable[int], delta0: Iterable[Iterable[int]], name: str = "") -> Locality:
    """``(L0, Δ0, S ∩ L0)`` on the restricted partial group (not verified).

    Carrier ids of the result are ranks inside ``L0``; ``pg.meta['embed']``
    maps them to ``loc``.
    """
    pg0 = sub_partial_group(loc.pg, L0)
    embed = pg0.meta["embed"]
    local = np.full(loc.pg.n, -1, dtype=np.intp)
    local[embed] = np.arange(embed.size)
    S0 = [int(local[s]) for s in loc.S if local[s] >= 0]
    d0 = []
    for P in delta0:
        ids = local[sorted(P)]
        if (ids < 0).any():
            raise InputError("Δ0 member not inside L0")
        d0.append(ids.tolist())
    return Locality(pg0, loc.p, S0, d0, name)


def is_sublocality(loc: Locality, loc0: Locality, embed: Sequence[int] | None = None, max_len: int = 4, budget: int = 10_000_000, seed: int = 42) -> bool:
    """Is ``loc0`` (mapped into ``loc`` by ``embed``) a sublocality?

    Requires the image to be a partial subgroup carrying exactly the
    restricted domain and product, ``S0 = S ∩ L0``, and ``loc0`` to be a
    locality.
    """
    emb = np.asarray(embed if embed is not None else loc0.pg.meta.get("embed"), dtype=np.intp)
    if emb.shape != (loc0.pg.n,) or np.unique(emb).size != emb.size:
        raise ContractError("sublocality embedding must be injective on the carrier")
    image = emb.tolist()
    if not is_partial_subgroup(loc.pg, image):
        return False
    inc = PartialGroupMap(loc0.pg, loc.pg, emb, "inclusion")
    if homomorphism_witness(inc) is not None or coverage_witness(inc, range(loc0.pg.n)) is not None:
        return False
    if frozenset(int(emb[s]) for s in loc0.S) != loc.S & frozenset(image):
        return False
    return verify_locality(loc0, max_len, budget, seed).passed
