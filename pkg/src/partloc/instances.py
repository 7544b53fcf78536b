"""Named example localities and fusion systems used by the suite and the CLI.

Ids look like ``S4/V4`` (the locality of ``S4`` at ``p = 2`` whose objects
are the overgroups of the normal Klein four subgroup; ``@3`` marks
``p = 3``), ``A x B`` for direct
products and ``A o B`` for central products over a diagonal central
subgroup.

Most group localities here have a normal subgroup among their objects and
so are groups as partial groups. ``S3xS3xC2/T`` is not: its objects are the
overgroups of the two factor Sylow subgroups ``T1 = S1×1×1`` and
``T2 = 1×S2×1``, and a pair ``(g, h)`` with ``S_g = T2 × C2`` and
``S_h = T1 × C2`` lies outside the domain.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from .errors import ConfigError
from .fusion import FusionSystem, direct_product_fusion, fusion_from_group
from .group_core import FiniteGroup, cyclic_group, direct_product_group, load_group, sylow
from .locality import Locality, locality_from_group
from .partial_group import PartialGroup, center
from .products import canonical_sublocalities, direct_product_locality
from .quotients import external_central_product_locality

__all__ = [
    "GROUP_LOCALITIES",
    "PRODUCTS",
    "CENTRAL_PRODUCTS",
    "FUSION_PAIRS",
    "instance_ids",
    "group",
    "locality",
    "fusion_pair",
    "corrupt_partial_group",
    "clear_cache",
]


@dataclass(frozen=True)
class GroupLocalitySpec:
    group: str
    p: int
    delta: str  # "1", "S" or a named generator


# normal Klein four and <(12)(34)> inside the catalog S4
_S4_V4 = (0, 7, 16, 23)
_S4_E = (0, 7)

GROUP_LOCALITIES: dict[str, GroupLocalitySpec] = {
    "C2/1": GroupLocalitySpec("C2", 2, "1"),
    "C6/1": GroupLocalitySpec("C6", 2, "1"),
    "C6@3/1": GroupLocalitySpec("C6", 3, "1"),
    "D8/1": GroupLocalitySpec("D8", 2, "1"),
    "Q8/1": GroupLocalitySpec("Q8", 2, "1"),
    "A4/1": GroupLocalitySpec("A4", 2, "1"),
    "S3/1": GroupLocalitySpec("S3", 2, "1"),
    "S3/C2": GroupLocalitySpec("S3", 2, "S"),
    "S4/1": GroupLocalitySpec("S4", 2, "1"),
    "S4/E": GroupLocalitySpec("S4", 2, "E"),
    "S4/V4": GroupLocalitySpec("S4", 2, "V4"),
    "S4/D8": GroupLocalitySpec("S4", 2, "S"),
    "S3xS3xC2/T": GroupLocalitySpec("S3xS3xC2", 2, "T"),
}

PRODUCTS: dict[str, tuple[str, str]] = {
    "S4/V4 x S3/C2": ("S4/V4", "S3/C2"),
    "S4/1 x S3/1": ("S4/1", "S3/1"),
    "S4/E x C2/1": ("S4/E", "C2/1"),
    "D8/1 x D8/1": ("D8/1", "D8/1"),
    "D8/1 x C6/1": ("D8/1", "C6/1"),
    "C6@3/1 x C6@3/1": ("C6@3/1", "C6@3/1"),
    "S3xS3xC2/T x C2/1": ("S3xS3xC2/T", "C2/1"),
}

# central products over the subgroup generated by (z1, z2) with z_i the
# least non-identity central element of the factor's order
CENTRAL_PRODUCTS: dict[str, tuple[str, int]] = {
    "D8/1 o D8/1": ("D8/1 x D8/1", 2),
    "D8/1 o C6/1": ("D8/1 x C6/1", 2),
    "C6@3/1 o C6@3/1": ("C6@3/1 x C6@3/1", 2),
    "S3xS3xC2/T o C2/1": ("S3xS3xC2/T x C2/1", 2),
}

# fusion systems F_S(G) at p = 2 for pairs with |S1 x S2| <= 16
FUSION_PAIRS: dict[str, tuple[str, str]] = {
    "F(S4) x F(S3)": ("S4", "S3"),
    "F(A4) x F(A4)": ("A4", "A4"),
    "F(D8) x F(C2)": ("D8", "C2"),
    "F(Q8) x F(C2)": ("Q8", "C2"),
    "F(C4) x F(A4)": ("C4", "A4"),
}


def instance_ids() -> list[str]:
    return sorted(GROUP_LOCALITIES) + sorted(PRODUCTS) + sorted(CENTRAL_PRODUCTS)


@lru_cache(maxsize=None)
def group(name: str) -> FiniteGroup:
    if name == "C6":
        return cyclic_group(6)
    if name == "S3xS3xC2":
        S3 = load_group("S3")
        return direct_product_group(direct_product_group(S3, S3), load_group("C2"))
    return load_group(name)


def _delta(entry: GroupLocalitySpec) -> list[list[int]]:
    G = group(entry.group)
    if entry.delta == "1":
        return [[0]]
    if entry.delta == "S":
        return [sorted(sylow(G, entry.p).members)]
    if entry.delta == "V4":
        return [list(_S4_V4)]
    if entry.delta == "E":
        return [list(_S4_E)]
    if entry.delta == "T":
        # ids are (a·6 + b)·2 + c; the Sylow parts of the two S3 factors
        S = sorted(sylow(G, entry.p).members)
        return [[x for x in S if (x // 2) % 6 == 0 and x % 2 == 0], [x for x in S if x // 12 == 0 and x % 2 == 0]]
    raise ConfigError(f"unknown object generator {entry.delta!r}")


def _central_element(L: PartialGroup, order: int) -> int:
    for z in sorted(center(L)):
        if z == 0:
            continue
        x, k = z, 1
        while x != 0:
            x = int(L.mul[x, z])
            k += 1
        if k == order:
            return z
    raise ConfigError(f"no central element of order {order}")


@lru_cache(maxsize=None)
def locality(iid: str) -> Locality:
    """Build (and verify) the named instance; cached per process."""
    if iid in GROUP_LOCALITIES:
        entry = GROUP_LOCALITIES[iid]
        return locality_from_group(group(entry.group), entry.p, _delta(entry), iid)
    if iid in PRODUCTS:
        a, b = PRODUCTS[iid]
        loc = direct_product_locality(locality(a), locality(b))
        loc.name = iid
        return loc
    if iid in CENTRAL_PRODUCTS:
        base, order = CENTRAL_PRODUCTS[iid]
        a, b = PRODUCTS[base]
        l1, l2 = locality(a), locality(b)
        z1, z2 = _central_element(l1.pg, order), _central_element(l2.pg, order)
        n2 = l2.pg.n
        gen = z1 * n2 + z2
        Z = {0}
        x = gen
        while x != 0:
            Z.add(x)
            x = int(locality(base).pg.mul[x, gen])
        return external_central_product_locality(l1, l2, sorted(Z), iid, direct=locality(base))
    raise ConfigError(f"unknown instance id {iid!r}")


def factors(iid: str) -> tuple[Locality, Locality]:
    """Canonical factor sublocalities of a product or central product instance."""
    if iid in PRODUCTS:
        return canonical_sublocalities(locality(iid))
    if iid in CENTRAL_PRODUCTS:
        return locality(iid).meta["factor_images"]
    raise ConfigError(f"{iid!r} is not a product instance")


@lru_cache(maxsize=None)
def fusion_pair(fid: str) -> tuple[FusionSystem, FusionSystem, FusionSystem]:
    """``(F1, F2, F1 × F2)`` for a named pair of group fusion systems."""
    if fid not in FUSION_PAIRS:
        raise ConfigError(f"unknown fusion instance {fid!r}")
    a, b = FUSION_PAIRS[fid]
    F1, F2 = fusion_from_group(group(a), 2), fusion_from_group(group(b), 2)
    return F1, F2, direct_product_fusion(F1, F2)


def corrupt_partial_group(L: PartialGroup) -> PartialGroup:
    """Swap two defined products in a row of ``L`` (a negative-control fixture).

    The first row ``f ≠ 1`` with two defined entries ``(f, a)``, ``(f, b)``
    (``a, b ≠ 1``) gets their products exchanged; this breaks associativity
    or cancellation while keeping the domain. Partial groups too small for a
    swap get ``f f⁻¹ = f`` for ``f = 1`` (the first non-identity element) instead.
    """
    mul = L.mul.copy()
    for f in range(1, L.n):
        cols = [a for a in range(1, L.n) if mul[f, a] >= 0 and mul[f, a] != 0]
        if len(cols) >= 2:
            a, b = cols[0], cols[1]
            mul[f, a], mul[f, b] = mul[f, b], mul[f, a]
            return PartialGroup(L.trans, L.accept, mul, L.inverse, L.labels, "corrupted", {"source": L})
    if L.n < 2:
        raise ConfigError("partial group too small to corrupt")
    mul[1, L.inverse[1]] = 1
    return PartialGroup(L.trans, L.accept, mul, L.inverse, L.labels, "corrupted", {"source": L})


def clear_cache() -> None:
    group.cache_clear()
    locality.cache_clear()
    fusion_pair.cache_clear()

