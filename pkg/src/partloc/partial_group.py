"""Finite partial groups with an automaton-described word domain.

A word domain ``D`` is infinite, so it is never enumerated. Every partial
group built here carries a deterministic automaton over the carrier: a word
lies in ``D`` exactly when every prefix of it drives the automaton through
accepting states. The product of a word in ``D`` is the left fold of the
binary product table ``mul`` (``-1`` marks pairs outside ``D``); the
substitution axiom makes the fold agree with the product on ``D``.

This description is exact for every constructor in the library (groups,
localities built from groups, direct products, central quotients and
partial subgroups), so subgroup, partial-subgroup and morphism questions
can be decided by searching the finite state space instead of sampling.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, InputError, UndefinedConjugationError
from .group_core import FiniteGroup

__all__ = [
    "Word",
    "PartialGroup",
    "AxiomReport",
    "pg_from_group",
    "check_axioms",
    "identity_insertion_check",
    "conj_domain",
    "conjugate",
    "s_sub_g",
    "centralizer",
    "normalizer",
    "center",
    "is_partial_subgroup",
    "is_subgroup",
    "is_partial_normal",
    "centralizer_equivalences_check",
    "sub_partial_group",
    "subgroup_as_group",
]

Word = tuple[int, ...]

MAX_WITNESSES = 20


class PartialGroup:
    """Carrier ``0..n-1`` with identity ``0``, inversion, domain and product.

    ``trans[state, f]`` is the automaton transition, ``accept[state]`` marks
    states whose words lie in the domain, and state ``0`` is the start.
    ``meta`` records constructor arguments (factors, parent, projection).
    """

    def __init__(
        self,
        trans: np.ndarray,
        accept: np.ndarray,
        mul: np.ndarray,
        inverse: np.ndarray,
        labels: Sequence[str] | None = None,
        provenance: str = "group",
        meta: dict | None = None,
    ):
        self.trans = np.ascontiguousarray(trans, dtype=np.intp)
        self.accept = np.asarray(accept, dtype=bool)
        self.mul = np.ascontiguousarray(mul, dtype=np.intp)
        self.inverse = np.asarray(inverse, dtype=np.intp)
        n = self.mul.shape[0]
        if self.trans.shape[1] != n or self.inverse.shape != (n,):
            raise InputError("automaton, product table and inversion disagree on carrier size")
        if not self.accept[0]:
            raise InputError("the empty word must lie in the domain")
        for a in (self.trans, self.accept, self.mul, self.inverse):
            a.setflags(write=False)
        self.n = n
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        self.provenance = provenance
        self.meta = meta or {}

    def __repr__(self) -> str:
        return f"PartialGroup({self.provenance}, |L|={self.n}, states={self.n_states})"

    def __len__(self) -> int:
        return self.n

    @property
    def n_states(self) -> int:
        return self.trans.shape[0]

    @property
    def identity(self) -> int:
        return 0

    @property
    def carrier(self) -> range:
        return range(self.n)

    def invert(self, f: int) -> int:
        return int(self.inverse[f])

    def _check_word(self, w: Iterable[int]) -> Word:
        w = tuple(int(f) for f in w)
        for f in w:
            if not 0 <= f < self.n:
                raise InputError(f"element id {f} not in carrier of size {self.n}")
        return w

    def in_domain(self, w: Iterable[int]) -> bool:
        state = 0
        for f in self._check_word(w):
            state = self.trans[state, f]
            if not self.accept[state]:
                return False
        return True

    def product(self, w: Iterable[int]) -> int:
        w = self._check_word(w)
        if not self.in_domain(w):
            raise DomainError(f"word {w} is not in the domain")
        x = 0
        for f in w:
            x = int(self.mul[x, f])
        return x

    def in_domain_batch(self, words: np.ndarray) -> np.ndarray:
        """Row-wise domain membership for an ``(m, k)`` array of words."""
        words = np.asarray(words, dtype=np.intp)
        state = np.zeros(words.shape[0], dtype=np.intp)
        alive = np.ones(words.shape[0], dtype=bool)
        for j in range(words.shape[1]):
            state = self.trans[state, words[:, j]]
            alive &= self.accept[state]
        return alive

    def product_batch(self, words: np.ndarray) -> np.ndarray:
        """Row-wise products, ``-1`` for rows outside the domain."""
        words = np.asarray(words, dtype=np.intp)
        ok = self.in_domain_batch(words)
        x = np.zeros(words.shape[0], dtype=np.intp)
        for j in range(words.shape[1]):
            y = self.mul[np.maximum(x, 0), words[:, j]]
            x = np.where(x >= 0, y, -1)
        return np.where(ok, x, -1)

    def invert_words(self, words: np.ndarray) -> np.ndarray:
        """``w^-1``: reversed with every entry inverted."""
        return self.inverse[np.asarray(words)[:, ::-1]]

    @cached_property
    def conj_table(self) -> np.ndarray:
        """``conj_table[x, g] = x^g`` or ``-1`` when ``x`` is not in ``D(g)``."""
        n = self.n
        x, g = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        words = np.stack([self.inverse[g.ravel()], x.ravel(), g.ravel()], axis=1)
        out = self.product_batch(words).reshape(n, n)
        out.setflags(write=False)
        return out

    @cached_property
    def pair_defined(self) -> np.ndarray:
        return self.mul >= 0

    def reachable_states(self, letters: Iterable[int] | None = None) -> np.ndarray:
        """Accepting states reachable from the start using ``letters``."""
        cols = np.arange(self.n) if letters is None else np.fromiter(letters, dtype=np.intp)
        seen = np.zeros(self.n_states, dtype=bool)
        seen[0] = True
        frontier = np.array([0], dtype=np.intp)
        while frontier.size:
            nxt = np.unique(self.trans[np.ix_(frontier, cols)])
            nxt = nxt[self.accept[nxt] & ~seen[nxt]]
            seen[nxt] = True
            frontier = nxt
        return np.flatnonzero(seen)

    def reachable_trim(self) -> "PartialGroup":
        """Same partial group with unreachable automaton states removed."""
        live = self.reachable_states()
        dead_needed = not self.accept[self.trans[live]].all()
        remap = np.full(self.n_states, -1, dtype=np.intp)
        remap[live] = np.arange(live.size)
        k = live.size
        if dead_needed:
            remap[remap < 0] = k
        trans = remap[self.trans[live]]
        accept = np.ones(k, dtype=bool)
        if dead_needed:
            trans = np.vstack([trans, np.full((1, self.n), k, dtype=np.intp)])
            accept = np.append(accept, False)
        return PartialGroup(
            trans, accept, self.mul, self.inverse, self.labels, self.provenance, self.meta
        )


def pg_from_group(G: FiniteGroup) -> PartialGroup:
    """The group ``G`` as a partial group with every word in the domain."""
    n = G.order
    trans = np.zeros((1, n), dtype=np.intp)
    return PartialGroup(
        trans, np.array([True]), G.table, G.inverse, G.labels, "group", {"group": G}
    )


# --- axiom checking --------------------------------------------------------


@dataclass
class AxiomReport:
    checked_words: int = 0
    violations: list[tuple[str, tuple]] = field(default_factory=list)
    violation_count: int = 0
    exhaustive: bool = True

    @property
    def status(self) -> str:
        return "pass" if self.violation_count == 0 else "fail"

    @property
    def passed(self) -> bool:
        return self.violation_count == 0

    def add(self, axiom: str, witnesses: np.ndarray | Sequence, count: int | None = None):
        count = len(witnesses) if count is None else count
        if count == 0:
            return
        self.violation_count += count
        room = MAX_WITNESSES - len(self.violations)
        for w in list(witnesses)[: max(room, 0)]:
            self.violations.append((axiom, tuple(int(x) for x in np.atleast_1d(w))))

    def merge(self, other: "AxiomReport") -> None:
        self.checked_words += other.checked_words
        self.exhaustive &= other.exhaustive
        self.violation_count += other.violation_count
        room = MAX_WITNESSES - len(self.violations)
        self.violations.extend(other.violations[: max(room, 0)])

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "checked_words": self.checked_words,
            "exhaustive": self.exhaustive,
            "violation_count": self.violation_count,
            "violations": [[a, list(w)] for a, w in self.violations],
        }


CHUNK = 1 << 18


def _word_batches(n: int, k: int, budget_k: int | None, rng: np.random.Generator):
    """Yield ``(m, k)`` arrays: all ``n**k`` words, or ``budget_k`` random ones."""
    if budget_k is None:
        total = n**k
        for start in range(0, total, CHUNK):
            idx = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
            cols = []
            for _ in range(k):
                cols.append(idx % n)
                idx = idx // n
            yield np.stack(cols[::-1], axis=1).astype(np.intp)
    else:
        left = budget_k
        while left > 0:
            m = min(CHUNK, left)
            yield rng.integers(0, n, size=(m, k), dtype=np.intp)
            left -= m


def _length_plan(n: int, max_len: int, budget: int) -> tuple[dict[int, int | None], bool]:
    """Per length: ``None`` to enumerate, or a sample size."""
    if max_len < 2:
        raise InputError("max_len must be at least 2")
    if sum(n**k for k in range(1, max_len + 1)) <= budget:
        return {k: None for k in range(1, max_len + 1)}, True
    plan: dict[int, int | None] = {1: None, 2: None}
    long_lengths = list(range(3, max_len + 1))
    share = max(1, budget // max(1, len(long_lengths)))
    for k in long_lengths:
        plan[k] = None if n**k <= share else share
    return plan, all(v is None for v in plan.values())


def _check_batch(L: PartialGroup, words: np.ndarray, report: AxiomReport) -> None:
    m, k = words.shape
    report.checked_words += m
    prod = L.product_batch(words)
    ind = prod >= 0
    if not ind.any():
        return
    w = words[ind]
    pw = prod[ind]
    # (1) splitting: u∘v ∈ D ⇒ u, v ∈ D
    for i in range(1, k):
        bad = ~(L.in_domain_batch(w[:, :i]) & L.in_domain_batch(w[:, i:]))
        report.add("1", w[bad], int(bad.sum()))
    # (3) substitution of a contiguous subword by its product
    for i in range(k):
        for j in range(i + 2, k + 1):
            inner = L.product_batch(w[:, i:j])
            bad = inner < 0
            report.add("1", w[bad], int(bad.sum()))
            sub = np.concatenate([w[:, :i], np.maximum(inner, 0)[:, None], w[:, j:]], axis=1)
            bad = (L.product_batch(sub) != pw) & ~bad
            report.add("3", w[bad], int(bad.sum()))
    # (4) w^-1 ∘ w ∈ D with product 1
    both = np.concatenate([L.invert_words(w), w], axis=1)
    bad = L.product_batch(both) != 0
    report.add("4", w[bad], int(bad.sum()))


def check_axioms(L: PartialGroup, max_len: int = 4, budget: int = 10_000_000, seed: int = 42) -> AxiomReport:
    """Check the partial-group axioms on all words up to ``max_len``.

    Axioms: (1) single letters lie in ``D`` and ``D`` is closed under
    splitting a word in two; (2) ``Π((f)) = f`` and ``Π(∅) = 1``; (3) a
    contiguous subword may be replaced by its product without leaving ``D``
    or changing the product; (4) inversion is an involution and
    ``w^-1 ∘ w ∈ D`` with product ``1``.

    Every length is enumerated when the total word count fits in
    ``budget``; otherwise lengths 1 and 2 are enumerated and ``budget`` words
    of the remaining lengths are drawn uniformly with the given seed.
    """
    report = AxiomReport()
    n = L.n
    ids = np.arange(n)
    if not np.array_equal(L.inverse[L.inverse], ids):
        report.add("4", [(int(f),) for f in np.flatnonzero(L.inverse[L.inverse] != ids)])
    singles = ids[:, None]
    bad = ~L.in_domain_batch(singles)
    report.add("1", singles[bad], int(bad.sum()))
    bad = L.product_batch(singles) != ids
    report.add("2", singles[bad], int(bad.sum()))
    if L.product(()) != 0:
        report.add("2", [()], 1)
    plan, exhaustive = _length_plan(n, max_len, budget)
    report.exhaustive = exhaustive
    rng = np.random.default_rng(seed)
    for k, size in sorted(plan.items()):
        for batch in _word_batches(n, k, size, rng):
            _check_batch(L, batch, report)
    return report


def identity_insertion_check(
    L: PartialGroup, max_len: int = 4, budget: int = 10_000_000, seed: int = 42
) -> AxiomReport:
    """Inserting ``1`` anywhere keeps a word in ``D`` with the same product.

    Also checks that words made only of ``1`` lie in ``D`` with product
    ``1``, up to length ``max_len + 1``.
    """
    report = AxiomReport()
    for k in range(max_len + 2):
        ones = np.zeros((1, k), dtype=np.intp)
        if L.product_batch(ones)[0] != 0:
            report.add("ones", ones)
    report.checked_words += max_len + 2
    plan, exhaustive = _length_plan(L.n, max_len - 1, budget) if max_len > 2 else (
        {1: None},
        True,
    )
    report.exhaustive = exhaustive
    rng = np.random.default_rng(seed)
    for k, size in sorted(plan.items()):
        for w in _word_batches(L.n, k, size, rng):
            report.checked_words += w.shape[0]
            prod = L.product_batch(w)
            ind = prod >= 0
            w, pw = w[ind], prod[ind]
            for i in range(k + 1):
                ins = np.concatenate(
                    [w[:, :i], np.zeros((w.shape[0], 1), dtype=np.intp), w[:, i:]], axis=1
                )
                bad = L.product_batch(ins) != pw
                report.add("insert", w[bad], int(bad.sum()))
    return report


# --- conjugation, centralizers, normalizers --------------------------------


def _check_element(L: PartialGroup, g: int) -> int:
    g = int(g)
    if not 0 <= g < L.n:
        raise InputError(f"element id {g} not in carrier of size {L.n}")
    return g


def _as_ids(L: PartialGroup, X: Iterable[int]) -> np.ndarray:
    out = np.array(sorted({int(x) for x in X}), dtype=np.intp)
    if out.size and (out[0] < 0 or out[-1] >= L.n):
        raise InputError("element ids out of range")
    return out


def conj_domain(L: PartialGroup, g: int) -> frozenset[int]:
    """``D(g) = {x : (g^-1, x, g) ∈ D}``."""
    g = _check_element(L, g)
    return frozenset(int(x) for x in np.flatnonzero(L.conj_table[:, g] >= 0))


def conjugate(L: PartialGroup, x: int, g: int) -> int:
    """``x^g = Π(g^-1, x, g)``."""
    x, g = _check_element(L, x), _check_element(L, g)
    y = int(L.conj_table[x, g])
    if y < 0:
        raise UndefinedConjugationError(f"{L.labels[x]} is not in D({L.labels[g]})")
    return y


def conjugate_set(L: PartialGroup, X: Iterable[int], g: int) -> frozenset[int]:
    col = L.conj_table[_as_ids(L, X), _check_element(L, g)]
    if (col < 0).any():
        raise UndefinedConjugationError("set is not contained in D(g)")
    return frozenset(int(y) for y in col)


def s_sub_g(L: PartialGroup, S: Iterable[int], g: int) -> frozenset[int]:
    """``S_g = {s ∈ S ∩ D(g) : s^g ∈ S}``."""
    idx = _as_ids(L, S)
    inside = np.zeros(L.n, dtype=bool)
    inside[idx] = True
    col = L.conj_table[idx, _check_element(L, g)]
    ok = (col >= 0) & inside[np.maximum(col, 0)]
    return frozenset(int(s) for s in idx[ok])


def centralizer(L: PartialGroup, X: Iterable[int]) -> frozenset[int]:
    """``C_L(X) = {g : x^g = x for all x ∈ X}``."""
    idx = _as_ids(L, X)
    ok = (L.conj_table[idx, :] == idx[:, None]).all(axis=0)
    return frozenset(int(g) for g in np.flatnonzero(ok))


def normalizer(L: PartialGroup, X: Iterable[int]) -> frozenset[int]:
    """``N_L(X) = {g : X ⊆ D(g), X^g = X}``."""
    idx = _as_ids(L, X)
    if idx.size == 0:
        return frozenset(range(L.n))
    inside = np.zeros(L.n, dtype=bool)
    inside[idx] = True
    block = L.conj_table[idx, :]
    ok = (block >= 0).all(axis=0) & inside[np.maximum(block, 0)].all(axis=0)
    # conjugation by g is injective on D(g), so X^g ⊆ X forces X^g = X
    return frozenset(int(g) for g in np.flatnonzero(ok))


def center(L: PartialGroup) -> frozenset[int]:
    return centralizer(L, range(L.n))


# --- partial subgroups -----------------------------------------------------


def _mask(L: PartialGroup, H: Iterable[int]) -> tuple[np.ndarray, np.ndarray]:
    idx = _as_ids(L, H)
    inside = np.zeros(L.n, dtype=bool)
    inside[idx] = True
    return idx, inside


def partial_subgroup_witness(L: PartialGroup, H: Iterable[int]) -> Word | None:
    """A word in ``W(H) ∩ D`` whose product leaves ``H``, or ``None``.

    Searches the finite set of pairs (automaton state, product so far)
    reachable by words in ``H``, so the answer covers words of every length.
    Inverse-closure failures are returned as the one-letter word.
    """
    idx, inside = _mask(L, H)
    if idx.size == 0:
        return ()
    for h in idx:
        if not inside[L.inverse[h]]:
            return (int(h),)
    start = (0, 0)
    if not inside[0]:
        return ()
    parent: dict[tuple[int, int], tuple[tuple[int, int], int] | None] = {start: None}
    queue = deque([start])
    while queue:
        s, x = queue.popleft()
        nxt_states = L.trans[s, idx]
        nxt_vals = L.mul[x, idx]
        for h, s2, x2 in zip(idx, nxt_states, nxt_vals):
            if not L.accept[s2]:
                continue
            key = (int(s2), int(x2))
            if key in parent:
                continue
            parent[key] = ((s, x), int(h))
            if not inside[x2]:
                return _unwind(parent, key)
            queue.append(key)
    return None


def _unwind(parent: dict, key) -> Word:
    out = []
    while parent[key] is not None:
        key, h = parent[key]
        out.append(h)
    return tuple(reversed(out))


def is_partial_subgroup(L: PartialGroup, H: Iterable[int]) -> bool:
    return partial_subgroup_witness(L, H) is None


def is_subgroup(L: PartialGroup, H: Iterable[int], budget: int | None = None) -> bool:
    """``H`` is a partial subgroup with ``W(H) ⊆ D``.

    Exact: the states reachable by words in ``H`` are all inspected.
    ``budget`` is accepted for interface symmetry and unused.
    """
    H = list(H)
    if not is_partial_subgroup(L, H):
        return False
    idx = _as_ids(L, H)
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for s in frontier:
            for s2 in np.unique(L.trans[s, idx]):
                s2 = int(s2)
                if not L.accept[s2]:
                    return False
                if s2 not in seen:
                    seen.add(s2)
                    nxt.append(s2)
        frontier = nxt
    return True


def is_partial_normal(L: PartialGroup, N: Iterable[int]) -> bool:
    """Partial subgroup with ``n^f ∈ N`` whenever ``n ∈ N ∩ D(f)``."""
    N = list(N)
    if not is_partial_subgroup(L, N):
        return False
    idx, inside = _mask(L, N)
    block = L.conj_table[idx, :]
    return bool(((block < 0) | inside[np.maximum(block, 0)]).all())


def centralizer_equivalences_check(L: PartialGroup) -> AxiomReport:
    """Pairwise check that the four descriptions of commuting elements agree.

    For ``f, g``: (1) ``f ∈ C(g)``; (2) ``g ∈ C(f)``; (3) the commutator word
    ``(f^-1, g^-1, f, g)`` lies in ``D`` with product ``1``; (4) the same for
    ``(g^-1, f^-1, g, f)``. When they hold, ``(f, g)`` and ``(g, f)`` must lie
    in ``D`` with equal products.
    """
    n = L.n
    report = AxiomReport()
    f, g = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    f, g = f.ravel(), g.ravel()
    report.checked_words = f.size
    inv = L.inverse
    c1 = L.conj_table[g, f] == g
    c2 = L.conj_table[f, g] == f
    c3 = L.product_batch(np.stack([inv[f], inv[g], f, g], axis=1)) == 0
    c4 = L.product_batch(np.stack([inv[g], inv[f], g, f], axis=1)) == 0
    agree = (c1 == c2) & (c1 == c3) & (c1 == c4)
    pairs = np.stack([f, g], axis=1)
    report.add("equivalence", pairs[~agree], int((~agree).sum()))
    fg = L.mul[f, g]
    gf = L.mul[g, f]
    bad = c1 & ((fg < 0) | (gf < 0) | (fg != gf))
    report.add("commute", pairs[bad], int(bad.sum()))
    return report


# --- partial subgroups as partial groups -----------------------------------


def sub_partial_group(L: PartialGroup, H: Iterable[int], provenance: str = "sub-partial-group") -> PartialGroup:
    """``H`` with the restricted domain ``D ∩ W(H)`` and product.

    Local ids follow ascending parent ids; ``meta['embed']`` maps them back.
    """
    H = list(H)
    witness = partial_subgroup_witness(L, H)
    if witness is not None:
        raise InputError(f"not a partial subgroup; witness word {witness}")
    embed = _as_ids(L, H)
    local = np.full(L.n, -1, dtype=np.intp)
    local[embed] = np.arange(embed.size)
    sub_mul = L.mul[np.ix_(embed, embed)]
    sub_mul = np.where(sub_mul >= 0, local[np.maximum(sub_mul, 0)], -1)
    pg = PartialGroup(
        L.trans[:, embed],
        L.accept,
        sub_mul,
        local[L.inverse[embed]],
        [L.labels[i] for i in embed],
        provenance,
        {"parent": L, "embed": embed},
    )
    return pg.reachable_trim()


def subgroup_as_group(L: PartialGroup, H: Iterable[int], name: str = "") -> tuple[FiniteGroup, np.ndarray]:
    """A subgroup of ``L`` (``W(H) ⊆ D``) as a finite group, with embedding."""
    H = list(H)
    if not is_subgroup(L, H):
        raise InputError("not a subgroup of the partial group")
    embed = _as_ids(L, H)
    local = np.full(L.n, -1, dtype=np.intp)
    local[embed] = np.arange(embed.size)
    table = local[L.mul[np.ix_(embed, embed)]]
    return FiniteGroup(table, name=name, labels=[L.labels[i] for i in embed], check=False), embed
