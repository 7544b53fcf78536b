"""Finite partial groups, localities and fusion systems.

Direct and central products of localities, central quotients, and
brute-force checks of their structural laws on small instances.
"""

from .errors import (
    ConfigError,
    ConstructionError,
    ContractError,
    DomainError,
    InputError,
    PartlocError,
    UndefinedConjugationError,
    UnsupportedInputError,
)
from .group_core import FiniteGroup, load_group
from .partial_group import PartialGroup, check_axioms, pg_from_group
from .morphisms import MapKind, PartialGroupMap, classify
from .locality import Locality, locality_from_group, verify_locality
from .fusion import FusionSystem, fusion_from_group
from .products import direct_product_locality, recognize_internal_product
from .quotients import canonical_projection_central, external_central_product_locality

__version__ = "0.1.0"

__all__ = [
    "PartlocError",
    "InputError",
    "ContractError",
    "ConfigError",
    "ConstructionError",
    "DomainError",
    "UndefinedConjugationError",
    "UnsupportedInputError",
    "FiniteGroup",
    "load_group",
    "PartialGroup",
    "pg_from_group",
    "check_axioms",
    "MapKind",
    "PartialGroupMap",
    "classify",
    "Locality",
    "locality_from_group",
    "verify_locality",
    "FusionSystem",
    "fusion_from_group",
    "direct_product_locality",
    "recognize_internal_product",
    "canonical_projection_central",
    "external_central_product_locality",
]
