"""Finite groups as multiplication tables.

Elements are dense integer ids ``0..n-1`` with ``0`` the identity. Every
higher layer (partial groups, localities, fusion systems) refers to elements
by these ids, so the helpers here work on plain ints, frozensets of ints and
numpy arrays rather than element objects.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError

__all__ = [
    "FiniteGroup",
    "Subgroup",
    "CATALOG_NAMES",
    "catalog_group",
    "load_group",
    "group_from_permutations",
    "cyclic_group",
    "closure",
    "sylow",
    "o_p",
    "is_characteristic_p",
    "direct_product_group",
    "quotient_group",
    "subgroup_as_group",
    "all_subgroups",
    "is_prime",
    "p_part",
]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def p_part(n: int, p: int) -> int:
    """Largest power of ``p`` dividing ``n``."""
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def _is_p_power(n: int, p: int) -> bool:
    return p_part(n, p) == n


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[a, b]`` is the id of ``a*b``. The table is validated on
    construction (identity, inverses, associativity) unless ``check=False``,
    which is reserved for constructions that are correct by design and for
    deliberately broken test fixtures.
    """

    def __init__(
        self,
        table: Sequence[Sequence[int]] | np.ndarray,
        name: str = "",
        labels: Sequence[str] | None = None,
        check: bool = True,
    ):
        t = np.asarray(table, dtype=np.intp)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise InputError("multiplication table must be a non-empty square array")
        n = t.shape[0]
        if t.min() < 0 or t.max() >= n:
            raise InputError("table entries out of range")
        self.table = t
        self.table.setflags(write=False)
        self.order = n
        self.name = name
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        if len(self.labels) != n:
            raise InputError("labels must have one entry per element")
        if check:
            self._validate()
        self.inverse = np.asarray(np.argmax(t == 0, axis=1), dtype=np.intp)
        self.inverse.setflags(write=False)

    def _validate(self) -> None:
        t, n = self.table, self.order
        ids = np.arange(n)
        if not (np.array_equal(t[0], ids) and np.array_equal(t[:, 0], ids)):
            raise InputError("element 0 is not a two-sided identity")
        has_inv = (t == 0).any(axis=1)
        if not has_inv.all():
            raise InputError(f"element {int(np.argmin(has_inv))} has no inverse")
        inv = np.argmax(t == 0, axis=1)
        if not np.array_equal(t[ids, inv], np.zeros(n, dtype=np.intp)) or not np.array_equal(
            t[inv, ids], np.zeros(n, dtype=np.intp)
        ):
            raise InputError("inverses are not two-sided")
        # chunk over the first factor to keep memory at O(n^2 * chunk)
        chunk = max(1, 2_000_000 // (n * n))
        for start in range(0, n, chunk):
            a = ids[start : start + chunk]
            lhs = t[t[a]]  # (ab)c
            rhs = t[a][:, t]  # a(bc)
            if not np.array_equal(lhs, rhs):
                bad = np.argwhere(lhs != rhs)[0]
                raise InputError(
                    "table is not associative at (%d, %d, %d)" % (a[bad[0]], bad[1], bad[2])
                )

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def word(self, *elements: int) -> int:
        x = 0
        for e in elements:
            x = int(self.table[x, e])
        return x

    def conj(self, x: int, g: int) -> int:
        """``x^g = g^-1 x g``."""
        return int(self.conj_table[x, g])

    @cached_property
    def conj_table(self) -> np.ndarray:
        """``conj_table[x, g] = g^-1 x g``."""
        t = self.table
        left = t[self.inverse[None, :], np.arange(self.order)[:, None]]  # g^-1 x at [x, g]
        return t[left, np.arange(self.order)[None, :]]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = int(self.table[x, a])
            k += 1
        return k

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def is_p_group(self, p: int) -> bool:
        return _is_p_power(self.order, p)

    def subgroup(self, members: Iterable[int]) -> "Subgroup":
        """Wrap ``members`` as a subgroup, checking closure."""
        m = frozenset(int(x) for x in members)
        if not is_subgroup_set(self, m):
            raise InputError("members do not form a subgroup")
        return Subgroup(self, m)

    def whole(self) -> "Subgroup":
        return Subgroup(self, frozenset(range(self.order)))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, frozenset({0}))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "table": self.table.tolist(),
            "labels": list(self.labels),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteGroup":
        try:
            table = obj["table"]
        except KeyError as exc:
            raise InputError("group file needs a 'table'") from exc
        if "order" in obj and int(obj["order"]) != len(table):
            raise InputError("'order' does not match table size")
        return cls(table, name=obj.get("name", ""), labels=obj.get("labels"))


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup of ``parent`` stored by member ids."""

    parent: FiniteGroup
    members: frozenset[int]

    def _same_parent(self, other: "Subgroup") -> None:
        if self.parent is not other.parent:
            raise InputError("cannot compare subgroups of different groups")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        self._same_parent(other)
        return self.members == other.members

    def __hash__(self) -> int:
        return hash(self.members)

    def __le__(self, other: "Subgroup") -> bool:
        self._same_parent(other)
        return self.members <= other.members

    def __lt__(self, other: "Subgroup") -> bool:
        self._same_parent(other)
        return self.members < other.members

    def __contains__(self, x: object) -> bool:
        return x in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    @property
    def order(self) -> int:
        return len(self.members)

    def __repr__(self) -> str:
        labels = self.parent.labels
        inner = ", ".join(labels[x] for x in sorted(self.members))
        return f"Subgroup({{{inner}}})"


def is_subgroup_set(G: FiniteGroup, members: frozenset[int] | set[int]) -> bool:
    if 0 not in members:
        return False
    idx = np.fromiter(members, dtype=np.intp)
    inside = np.zeros(G.order, dtype=bool)
    inside[idx] = True
    return bool(inside[G.table[np.ix_(idx, idx)]].all() and inside[G.inverse[idx]].all())


def _check_ids(G: FiniteGroup, ids: Iterable[int]) -> list[int]:
    out = []
    for x in ids:
        x = int(x)
        if not 0 <= x < G.order:
            raise InputError(f"element id {x} out of range for group of order {G.order}")
        out.append(x)
    return out


def closure_set(G: FiniteGroup, seed: Iterable[int]) -> frozenset[int]:
    """Smallest subgroup containing ``seed``, as a member set."""
    gens = sorted(set(_check_ids(G, seed)) - {0})
    members = {0}
    frontier = [0]
    t = G.table
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(t[x, g])
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(members)


def closure(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    return Subgroup(G, closure_set(G, seed))


def _extend_normalized(G: FiniteGroup, H: frozenset[int], g: int) -> frozenset[int]:
    """``<H, g>`` for ``g`` normalizing ``H``: the union of cosets ``H g^k``."""
    out = set(H)
    x = g
    t = G.table
    hs = list(H)
    while x not in H:
        out.update(int(t[h, x]) for h in hs)
        x = int(t[x, g])
    return frozenset(out)


def normalizer_set(G: FiniteGroup, H: Iterable[int]) -> frozenset[int]:
    idx = np.fromiter(H, dtype=np.intp)
    inside = np.zeros(G.order, dtype=bool)
    inside[idx] = True
    ok = inside[G.conj_table[idx, :]].all(axis=0)
    return frozenset(int(g) for g in np.flatnonzero(ok))


def centralizer_set(G: FiniteGroup, X: Iterable[int]) -> frozenset[int]:
    idx = np.fromiter(X, dtype=np.intp)
    if idx.size == 0:
        return frozenset(range(G.order))
    ok = (G.conj_table[idx, :] == idx[:, None]).all(axis=0)
    return frozenset(int(g) for g in np.flatnonzero(ok))


def sylow(G: FiniteGroup, p: int) -> Subgroup:
    """A Sylow ``p``-subgroup, grown deterministically from the identity.

    At each step the least id ``g`` in ``N_G(H) \\ H`` with ``g^p`` in ``H``
    is adjoined. Such a ``g`` exists while ``H`` is not Sylow because
    ``p`` divides ``|N_G(H) : H|`` for every non-Sylow ``p``-subgroup.
    """
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    target = p_part(G.order, p)
    H: frozenset[int] = frozenset({0})
    while len(H) < target:
        N = normalizer_set(G, H)
        for g in sorted(N - H):
            x = g
            for _ in range(p - 1):
                x = int(G.table[x, g])
            if x in H:
                H = _extend_normalized(G, H, g)
                break
        else:  # pragma: no cover - impossible by Sylow theory
            raise AssertionError("Sylow growth stalled")
    return Subgroup(G, H)


def o_p(G: FiniteGroup, p: int) -> Subgroup:
    """Largest normal ``p``-subgroup, as the core of a Sylow ``p``-subgroup."""
    P = sylow(G, p)
    idx = np.fromiter(P.members, dtype=np.intp)
    inside = np.zeros(G.order, dtype=bool)
    inside[idx] = True
    # x lies in every conjugate P^g iff x^{g^-1} lies in P for all g
    core = inside[G.conj_table[:, G.inverse]].all(axis=1)
    return Subgroup(G, frozenset(int(x) for x in np.flatnonzero(core)))


def is_characteristic_p(G: FiniteGroup, p: int) -> bool:
    """``C_G(O_p(G)) <= O_p(G)``."""
    Q = o_p(G, p)
    return centralizer_set(G, Q.members) <= Q.members


def direct_product_group(G1: FiniteGroup, G2: FiniteGroup) -> FiniteGroup:
    """Componentwise product; the pair ``(i, j)`` gets id ``i*|G2| + j``."""
    n2 = G2.order
    t = G1.table[:, None, :, None] * n2 + G2.table[None, :, None, :]
    n = G1.order * n2
    labels = [f"({a},{b})" for a in G1.labels for b in G2.labels]
    name = f"{G1.name}x{G2.name}" if G1.name and G2.name else ""
    return FiniteGroup(t.reshape(n, n), name=name, labels=labels, check=False)


def subgroup_as_group(
    G: FiniteGroup, H: Iterable[int], name: str = ""
) -> tuple[FiniteGroup, np.ndarray]:
    """Relabel the subgroup ``H`` densely (ascending ids) as its own group.

    Returns the group and ``embed`` with ``embed[i]`` the id in ``G`` of
    local element ``i``.
    """
    embed = np.array(sorted(H), dtype=np.intp)
    if embed.size == 0 or embed[0] != 0:
        raise InputError("subgroup must contain the identity")
    local = np.full(G.order, -1, dtype=np.intp)
    local[embed] = np.arange(embed.size)
    sub = local[G.table[np.ix_(embed, embed)]]
    if (sub < 0).any():
        raise InputError("members do not form a subgroup")
    labels = [G.labels[i] for i in embed]
    return FiniteGroup(sub, name=name, labels=labels, check=False), embed


def quotient_group(G: FiniteGroup, N: Iterable[int]) -> tuple[FiniteGroup, np.ndarray]:
    """``G/N`` for normal ``N``.

    Cosets are ordered by their least member id, so the coset of the
    identity gets id 0. Returns the group and the projection array.
    """
    Nset = frozenset(N)
    if not is_subgroup_set(G, Nset):
        raise InputError("N is not a subgroup")
    if normalizer_set(G, Nset) != frozenset(range(G.order)):
        raise InputError("N is not normal")
    nidx = np.array(sorted(Nset), dtype=np.intp)
    reps = sorted({int(G.table[nidx, g].min()) for g in range(G.order)})
    rep_id = {r: i for i, r in enumerate(reps)}
    proj = np.array([rep_id[int(G.table[nidx, g].min())] for g in range(G.order)], dtype=np.intp)
    reps_arr = np.array(reps, dtype=np.intp)
    table = proj[G.table[np.ix_(reps_arr, reps_arr)]]
    labels = [G.labels[r] + "N" if len(Nset) > 1 else G.labels[r] for r in reps]
    name = f"{G.name}/N" if G.name else ""
    return FiniteGroup(table, name=name, labels=labels, check=False), proj


def _mask(members: Iterable[int]) -> int:
    m = 0
    for x in members:
        m |= 1 << x
    return m


def _from_mask(m: int) -> frozenset[int]:
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return frozenset(out)


def subgroup_sort_key(H: Iterable[int]) -> tuple:
    s = sorted(H)
    return (len(s), s)


def all_subgroups(G: FiniteGroup) -> list[frozenset[int]]:
    """Every subgroup of ``G``, sorted by (order, member list).

    For ``p``-groups subgroups are grown by normal index-``p`` steps, which
    reach every subgroup. Otherwise cyclic subgroups are joined pairwise to
    a fixpoint.
    """
    n = G.order
    primes = [q for q in range(2, n + 1) if n % q == 0 and is_prime(q)]
    if n == 1:
        return [frozenset({0})]
    if len(primes) == 1:
        return _p_group_subgroups(G, primes[0])
    cyclic = {closure_set(G, [g]) for g in range(n)}
    found = set(cyclic)
    frontier = list(cyclic)
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclic:
                if C <= H:
                    continue
                J = closure_set(G, H | C)
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    return sorted(found, key=subgroup_sort_key)


def _p_group_subgroups(G: FiniteGroup, p: int) -> list[frozenset[int]]:
    n = G.order
    conj = G.conj_table
    pth = np.arange(n)
    for _ in range(p - 1):
        pth = G.table[pth, np.arange(n)]
    found = {frozenset({0})}
    frontier = [frozenset({0})]
    while frontier:
        nxt = []
        for H in frontier:
            idx = np.fromiter(H, dtype=np.intp)
            inside = np.zeros(n, dtype=bool)
            inside[idx] = True
            normalizes = inside[conj[idx, :]].all(axis=0)
            cand = np.flatnonzero(normalizes & ~inside & inside[pth])
            covered: set[int] = set()
            for g in cand:
                g = int(g)
                if g in covered:
                    continue
                J = _extend_normalized(G, H, g)
                covered |= J
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    return sorted(found, key=subgroup_sort_key)


# --- catalog ---------------------------------------------------------------

CATALOG_NAMES = ("C2", "C3", "C4", "V4", "C8", "D8", "Q8", "S3", "S4", "A4")


def _cycle_label(perm: tuple[int, ...]) -> str:
    seen = set()
    cycles = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        c = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            c.append(j)
            seen.add(j)
            j = perm[j]
        cycles.append("(" + "".join(str(k + 1) for k in c) + ")")
    return "".join(cycles) or "()"


def group_from_permutations(
    gens: Sequence[Sequence[int]], name: str = "", labeler=None
) -> FiniteGroup:
    """Group generated by permutations of ``0..d-1``.

    Elements are numbered identity first, then by the lexicographic order of
    their image tuples. Composition is left-to-right: ``a*b`` applies ``a``
    first (points are acted on from the right, as in the conjugation
    convention ``x^g = g^-1 x g``).
    """
    gens = [tuple(g) for g in gens]
    d = len(gens[0]) if gens else 1
    ident = tuple(range(d))
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = tuple(g[a[i]] for i in range(d))
                if b not in elems:
                    elems.add(b)
                    nxt.append(b)
        frontier = nxt
    order = [ident] + sorted(elems - {ident})
    pos = {e: i for i, e in enumerate(order)}
    n = len(order)
    table = np.empty((n, n), dtype=np.intp)
    for i, a in enumerate(order):
        for j, b in enumerate(order):
            table[i, j] = pos[tuple(b[a[k]] for k in range(d))]
    labeler = labeler or _cycle_label
    return FiniteGroup(table, name=name, labels=[labeler(e) for e in order])


def cyclic_group(n: int, name: str = "") -> FiniteGroup:
    table = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    labels = ["1"] + ["a" if k == 1 else f"a^{k}" for k in range(1, n)]
    return FiniteGroup(table, name=name or f"C{n}", labels=labels)


def _quaternion_group() -> FiniteGroup:
    # unit quaternions as (sign, unit) with unit in 1,i,j,k
    units = ["1", "i", "j", "k"]
    mult = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elems = [(1, "1"), (-1, "1")] + [(s, u) for u in units[1:] for s in (1, -1)]
    pos = {e: i for i, e in enumerate(elems)}
    table = np.empty((8, 8), dtype=np.intp)
    for a, (sa, ua) in enumerate(elems):
        for b, (sb, ub) in enumerate(elems):
            s, u = mult[(ua, ub)]
            table[a, b] = pos[(sa * sb * s, u)]
    labels = [("" if s > 0 else "-") + u for s, u in elems]
    return FiniteGroup(table, name="Q8", labels=labels)


def catalog_group(name: str) -> FiniteGroup:
    """Built-in groups; permutation groups act on ``{1, .., d}``."""
    if name in ("C2", "C3", "C4", "C8"):
        return cyclic_group(int(name[1:]), name)
    if name == "V4":
        return group_from_permutations([(1, 0, 3, 2), (2, 3, 0, 1)], "V4")
    if name == "D8":
        return group_from_permutations([(1, 2, 3, 0), (2, 1, 0, 3)], "D8")
    if name == "Q8":
        return _quaternion_group()
    if name == "S3":
        return group_from_permutations([(1, 0, 2), (1, 2, 0)], "S3")
    if name == "S4":
        return group_from_permutations([(1, 0, 2, 3), (1, 2, 3, 0)], "S4")
    if name == "A4":
        return group_from_permutations([(1, 2, 0, 3), (1, 0, 3, 2)], "A4")
    raise InputError(f"unknown catalog group {name!r}; known: {', '.join(CATALOG_NAMES)}")


def load_group(source: str | dict | FiniteGroup) -> FiniteGroup:
    """Catalog name, path to a group JSON file, inline dict, or a group."""
    if isinstance(source, FiniteGroup):
        return source
    if isinstance(source, dict):
        return FiniteGroup.from_json(source)
    if source in CATALOG_NAMES:
        return catalog_group(source)
    path = Path(source)
    if not path.exists():
        raise InputError(f"{source!r} is neither a catalog group nor a file")
    return FiniteGroup.from_json(json.loads(path.read_text()))


def element_by_label(G: FiniteGroup, label: str) -> int:
    try:
        return G.labels.index(label)
    except ValueError as exc:
        raise InputError(f"no element labelled {label!r} in {G.name}") from exc


def iter_pairs(n: int):
    return itertools.product(range(n), repeat=2)
