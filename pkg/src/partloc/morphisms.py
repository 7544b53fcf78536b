"""Maps between partial groups and their classification.

A map is stored as an array over source ids. Whether it is a homomorphism,
a projection or an isomorphism is decided exactly by searching the joint
state spaces of the two domain automata:

* homomorphism: walk pairs (source state, target state, source product)
  reachable by words in ``D`` and check the image word stays in ``D'`` with
  the right product;
* projection: walk target states together with the set of source states
  reached by preimage words in ``D``; an empty set at an accepting target
  state is a word of ``D'`` with no preimage in ``D``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractError, InputError
from .partial_group import PartialGroup, Word, is_partial_normal, is_partial_subgroup

__all__ = [
    "MapKind",
    "Classification",
    "PartialGroupMap",
    "induced_word_map",
    "classify",
    "kernel",
    "image_partial_subgroup",
    "ImageResult",
    "identity_map",
    "compose",
    "transport_structure",
]


class MapKind(IntEnum):
    NONE = 0
    HOMOMORPHISM = 1
    PROJECTION = 2
    ISOMORPHISM = 3

    def __str__(self) -> str:
        return self.name.lower()


@dataclass
class Classification:
    kind: MapKind
    exact: bool = True
    injective: bool = False
    witness: Word | None = None
    reason: str = ""

    def at_least(self, kind: MapKind) -> bool:
        return self.kind >= kind


class PartialGroupMap:
    """``images[f]`` is the image of source element ``f``."""

    def __init__(self, source: PartialGroup, target: PartialGroup, images: Sequence[int] | np.ndarray, name: str = ""):
        arr = np.asarray(images, dtype=np.intp)
        if arr.shape != (source.n,):
            raise InputError("map must have one image per source element")
        if arr.size and (arr.min() < 0 or arr.max() >= target.n):
            raise InputError("map images fall outside the target carrier")
        arr.setflags(write=False)
        self.source = source
        self.target = target
        self.images = arr
        self.name = name
        self._classification: Classification | None = None

    def __call__(self, f: int) -> int:
        return int(self.images[f])

    def __repr__(self) -> str:
        return f"PartialGroupMap({self.name or '?'}: {self.source.n} -> {self.target.n})"

    @property
    def is_injective(self) -> bool:
        return np.unique(self.images).size == self.images.size

    @property
    def is_surjective(self) -> bool:
        return np.unique(self.images).size == self.target.n

    def image(self, X: Iterable[int]) -> frozenset[int]:
        return frozenset(int(self.images[x]) for x in X)

    def preimage(self, Y: Iterable[int]) -> frozenset[int]:
        mask = np.zeros(self.target.n, dtype=bool)
        mask[list(Y)] = True
        return frozenset(int(f) for f in np.flatnonzero(mask[self.images]))

    def classification(self, budget: int | None = None, seed: int = 42) -> Classification:
        if self._classification is None:
            self._classification = classify(self, budget, seed)
        return self._classification

    def inverse(self) -> "PartialGroupMap":
        if not (self.is_injective and self.is_surjective):
            raise ContractError("only bijective maps can be inverted")
        inv = np.empty(self.target.n, dtype=np.intp)
        inv[self.images] = np.arange(self.source.n)
        return PartialGroupMap(self.target, self.source, inv, f"{self.name}^-1")


def identity_map(L: PartialGroup) -> PartialGroupMap:
    return PartialGroupMap(L, L, np.arange(L.n), "id")


def compose(a: PartialGroupMap, b: PartialGroupMap) -> PartialGroupMap:
    """``f ↦ (f a) b``."""
    if a.target is not b.source:
        raise InputError("maps are not composable")
    return PartialGroupMap(a.source, b.target, b.images[a.images], f"{a.name}{b.name}")


def transport_structure(L: PartialGroup, perm: Sequence[int] | np.ndarray, name: str = "σ") -> tuple[PartialGroup, PartialGroupMap]:
    """Relabel ``L`` along a bijection ``perm`` of the carrier fixing ``0``.

    Returns the relabelled partial group ``L'`` and ``σ: L → L'``, which is
    an isomorphism by construction.
    """
    perm = np.asarray(perm, dtype=np.intp)
    if perm.shape != (L.n,) or perm[0] != 0 or np.unique(perm).size != L.n or perm.min() < 0 or perm.max() >= L.n:
        raise InputError("perm must be a bijection of the carrier fixing the identity")
    inv = np.empty_like(perm)
    inv[perm] = np.arange(L.n)
    m = L.mul[np.ix_(inv, inv)]
    mul = np.where(m >= 0, perm[np.maximum(m, 0)], -1)
    labels = [L.labels[i] for i in inv]
    M = PartialGroup(L.trans[:, inv], L.accept, mul, perm[L.inverse[inv]], labels, "transported", {"source": L})
    return M, PartialGroupMap(L, M, perm, name)


def induced_word_map(beta: PartialGroupMap, w: Iterable[int]) -> Word:
    return tuple(int(beta.images[f]) for f in w)


def _unwind(parent: dict, key) -> Word:
    out = []
    while parent[key] is not None:
        key, f = parent[key]
        out.append(f)
    return tuple(reversed(out))


def homomorphism_witness(beta: PartialGroupMap) -> tuple[Word, str] | None:
    """A word ``v ∈ D`` with ``vβ* ∉ D'`` or a wrong product, else ``None``."""
    L, M, img = beta.source, beta.target, beta.images
    if img[0] != 0:
        return (), "identity not preserved"
    letters = np.arange(L.n)
    start = (0, 0, 0)
    parent: dict = {start: None}
    queue = deque([start])
    while queue:
        s, t, x = key = queue.popleft()
        s2 = L.trans[s, letters]
        ok = L.accept[s2]
        f_ok = letters[ok]
        s2 = s2[ok]
        t2 = M.trans[t, img[f_ok]]
        x2 = L.mul[x, f_ok]
        dom_bad = ~M.accept[t2]
        prod_bad = (M.mul[img[x], img[f_ok]] != img[np.maximum(x2, 0)]) | (x2 < 0)
        bad = dom_bad | prod_bad
        if bad.any():
            k = int(np.argmax(bad))
            word = _unwind(parent, key) + (int(f_ok[k]),)
            return word, "image word outside D'" if dom_bad[k] else "product not preserved"
        for f, a, b, c in zip(f_ok.tolist(), s2.tolist(), t2.tolist(), x2.tolist()):
            nk = (a, b, c)
            if nk not in parent:
                parent[nk] = (key, f)
                queue.append(nk)
    return None


def coverage_witness(
    beta: PartialGroupMap,
    H: Iterable[int] | None = None,
) -> Word | None:
    """A word in ``D' ∩ W(Hβ)`` with no preimage in ``D ∩ W(H)``, else ``None``.

    With ``H = None`` this tests ``D' ⊆ Dβ*`` (the surjectivity half of a
    projection). The returned witness is a target word.
    """
    L, M, img = beta.source, beta.target, beta.images
    src = np.arange(L.n) if H is None else np.array(sorted(set(H)), dtype=np.intp)
    targets = np.unique(img[src])
    pre = {int(c): src[img[src] == c] for c in targets}
    tgt_letters = np.arange(M.n) if H is None else targets
    for c in tgt_letters:
        if int(c) not in pre:
            return (int(c),)
    start = (0, frozenset({0}))
    parent: dict = {start: None}
    queue = deque([start])
    while queue:
        key = queue.popleft()
        t, states = key
        st = np.fromiter(states, dtype=np.intp)
        for c in tgt_letters.tolist():
            t2 = int(M.trans[t, c])
            if not M.accept[t2]:
                continue
            nxt = L.trans[np.ix_(st, pre[c])].ravel()
            nxt = nxt[L.accept[nxt]]
            if nxt.size == 0:
                return _unwind(parent, key) + (c,)
            nk = (t2, frozenset(nxt.tolist()))
            if nk not in parent:
                parent[nk] = (key, c)
                queue.append(nk)
    return None


def classify(beta: PartialGroupMap, budget: int | None = None, seed: int = 42) -> Classification:
    """Strongest of none < homomorphism < projection < isomorphism.

    Both domains are automaton-described, so the verdict is exact and the
    ``budget``/``seed`` arguments are not consumed.
    """
    injective = beta.is_injective
    hw = homomorphism_witness(beta)
    if hw is not None:
        return Classification(MapKind.NONE, True, injective, hw[0], hw[1])
    cw = coverage_witness(beta)
    if cw is not None:
        return Classification(MapKind.HOMOMORPHISM, True, injective, cw, "target word without preimage in D")
    kind = MapKind.ISOMORPHISM if injective else MapKind.PROJECTION
    return Classification(kind, True, injective)


def kernel(beta: PartialGroupMap) -> frozenset[int]:
    """Preimage of the target identity; requires a homomorphism."""
    if not beta.classification().at_least(MapKind.HOMOMORPHISM):
        raise ContractError("kernel is only defined for homomorphisms")
    K = beta.preimage([0])
    if not is_partial_normal(beta.source, K):  # pragma: no cover - theorem
        raise AssertionError("kernel of a homomorphism is not partial normal")
    return K


@dataclass
class ImageResult:
    image: frozenset[int]
    domain_equality: bool
    is_partial_subgroup: bool
    witness: Word | None = field(default=None)


def image_partial_subgroup(
    beta: PartialGroupMap, H: Iterable[int], budget: int | None = None, seed: int = 42
) -> ImageResult:
    """``Hβ`` and whether ``(D ∩ W(H))β* = D' ∩ W(Hβ)`` holds (exactly)."""
    H = sorted(set(H))
    if not is_partial_subgroup(beta.source, H):
        raise ContractError("H is not a partial subgroup of the source")
    image = beta.image(H)
    witness = coverage_witness(beta, H)
    return ImageResult(image, witness is None, is_partial_subgroup(beta.target, image), witness)
