"""Locality recipes: how the CLI names, builds and saves instances.

Partial groups are saved by the constructor call that produced them, never by
listing their domain. A recipe is one of

* ``{"instance": "S4/V4"}``: a named example instance;
* ``{"group": name-or-inline, "p": prime, "delta_generators": [[ids]]}``;
* ``{"kind": "direct", "lhs": recipe, "rhs": recipe}``;
* ``{"kind": "central", "lhs": recipe, "rhs": recipe, "center": [[i, j], ...]}``,
  where ``(i, j)`` is the pair ``(f, g)`` of the direct product and the
  listed pairs generate the central subgroup.

Command-line arguments may be a file path, inline JSON or an instance id.
"""

from __future__ import annotations

import json
from pathlib import Path

from . import instances
from .errors import ConfigError, InputError
from .group_core import load_group
from .locality import Locality, locality_from_group, sublocality
from .partial_group import PartialGroup
from .products import canonical_sublocalities, direct_product_locality
from .quotients import external_central_product_locality

__all__ = ["read_recipe", "resolve", "build_locality", "center_from_pairs", "read_sublocality", "dump_recipe"]


def _read_json(text: str, what: str):
    path = Path(text)
    if path.exists():
        try:
            return json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{what}: {path} is not valid JSON ({exc})") from exc
    if text.lstrip().startswith(("{", "[")):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{what}: invalid inline JSON ({exc})") from exc
    return None


def read_recipe(text: str) -> dict:
    """Path, inline JSON or instance id to a recipe dict."""
    if text in instances.instance_ids():
        return {"instance": text}
    obj = _read_json(text, "locality")
    if obj is None:
        raise ConfigError(f"{text!r} is neither a file, inline JSON nor an instance id")
    if not isinstance(obj, dict):
        raise ConfigError("a locality recipe must be a JSON object")
    return obj


def _ids(obj, what: str) -> list[int]:
    if not isinstance(obj, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in obj):
        raise InputError(f"{what} must be a list of integer ids")
    return obj


def center_from_pairs(prod: PartialGroup, n2: int, pairs) -> list[int]:
    """The subgroup of ``prod`` generated by the pairs ``(i, j) ↦ i·n2 + j``."""
    if not isinstance(pairs, list) or not pairs:
        raise InputError("center must be a non-empty list of [i, j] pairs")
    gens = []
    for pr in pairs:
        if len(_ids(pr, "center pair")) != 2:
            raise InputError(f"center pair {pr} must have two entries")
        i, j = pr
        if not (0 <= i < prod.n // n2 and 0 <= j < n2):
            raise InputError(f"center pair {pr} out of range")
        gens.append(i * n2 + j)
    Z = {0}
    todo = list(gens)
    while todo:
        x = todo.pop()
        if x in Z:
            continue
        Z.add(x)
        for z in list(Z):
            for y in (int(prod.mul[x, z]), int(prod.mul[z, x])):
                if y < 0:
                    raise InputError("center generators do not multiply inside the product")
                if y not in Z:
                    todo.append(y)
    return sorted(Z)


def build_locality(recipe: dict, verify: bool = False, max_len: int = 4, budget: int = 10_000_000, seed: int = 42) -> Locality:
    """Build the locality a recipe describes.

    With ``verify`` every constructor verifies its output and raises
    ``ConstructionError`` on failure; otherwise the caller verifies.
    """
    if not isinstance(recipe, dict):
        raise ConfigError("a locality recipe must be a JSON object")
    kw = dict(verify=verify, max_len=max_len, budget=budget, seed=seed)
    if "instance" in recipe:
        if recipe["instance"] not in instances.instance_ids():
            raise ConfigError(f"unknown instance id {recipe['instance']!r}")
        return instances.locality(recipe["instance"])
    if "group" in recipe:
        for key in ("p", "delta_generators"):
            if key not in recipe:
                raise ConfigError(f"locality recipe needs {key!r}")
        G = load_group(recipe["group"])
        gens = recipe["delta_generators"]
        if not isinstance(gens, list) or not gens:
            raise InputError("delta_generators must be a non-empty list of id lists")
        for P in gens:
            for x in _ids(P, "delta generator"):
                if not 0 <= x < G.order:
                    raise InputError(f"id {x} out of range for a group of order {G.order}")
        p = recipe["p"]
        if not isinstance(p, int):
            raise InputError("p must be an integer")
        name = recipe.get("name") or (recipe["group"] if isinstance(recipe["group"], str) else "")
        return locality_from_group(G, p, gens, name, **kw)
    kind = recipe.get("kind")
    if kind not in ("direct", "central"):
        raise ConfigError("recipe needs 'instance', 'group' or kind direct|central")
    if "lhs" not in recipe or "rhs" not in recipe:
        raise ConfigError("product recipe needs 'lhs' and 'rhs'")
    a = build_locality(recipe["lhs"], **kw)
    b = build_locality(recipe["rhs"], **kw)
    prod = direct_product_locality(a, b, **kw)
    if kind == "direct":
        return prod
    if "center" not in recipe:
        raise ConfigError("central product recipe needs 'center'")
    Z = center_from_pairs(prod.pg, b.pg.n, recipe["center"])
    return external_central_product_locality(a, b, Z, direct=prod, **kw)


def read_sublocality(ambient: Locality, text: str) -> Locality:
    """``hat1``/``hat2`` (factors of a direct product), ``image1``/``image2``
    (factors of a central product) or ``{"elements": [...], "delta": [[...]]}``
    in ambient ids."""
    if text in ("hat1", "hat2"):
        if "factors" not in ambient.meta:
            raise ConfigError(f"{text} needs a direct product ambient")
        return canonical_sublocalities(ambient)[int(text[-1]) - 1]
    if text in ("image1", "image2"):
        if "factor_images" not in ambient.meta:
            raise ConfigError(f"{text} needs a central product ambient")
        return ambient.meta["factor_images"][int(text[-1]) - 1]
    obj = _read_json(text, "sublocality")
    if not isinstance(obj, dict) or "elements" not in obj or "delta" not in obj:
        raise ConfigError("sublocality must be hat1|hat2|image1|image2 or {'elements', 'delta'}")
    elements = _ids(obj["elements"], "elements")
    if not all(0 <= x < ambient.pg.n for x in elements):
        raise InputError("sublocality element out of range")
    delta = [_ids(P, "delta member") for P in obj["delta"]]
    return sublocality(ambient, elements, delta, obj.get("name", ""))


def dump_recipe(recipe: dict) -> str:
    """Recipes are written with sorted keys so files diff cleanly."""
    return json.dumps(recipe, sort_keys=True, indent=2) + "\n"


def resolve(recipe: dict) -> dict:
    """Inline nested recipes given as file paths or instance ids."""
    out = dict(recipe)
    for key in ("lhs", "rhs"):
        if isinstance(out.get(key), str):
            out[key] = resolve(read_recipe(out[key]))
        elif isinstance(out.get(key), dict):
            out[key] = resolve(out[key])
    return out

