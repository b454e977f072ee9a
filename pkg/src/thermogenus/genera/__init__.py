"""
Generating Function Registry

Maps each GenusKind to the GeneratingFunction implementation that builds its
series. Additional generating functions can be registered at runtime.
"""

from typing import Dict, List, Type, Union
import logging

from ..errors import UnknownGenusKind
from .base import GeneratingFunction, GenusKind, RootConvention
from .bernoulli import bernoulli_number
from .cosh_half import CoshHalf
from .hirzebruch import AHatGenus, LGenus
from .todd import ToddGenus

lgr = logging.getLogger(__name__)

# Genus Registry - maps genus kinds to generating function classes
GENUS_REGISTRY: Dict[GenusKind, Type[GeneratingFunction]] = {
    GenusKind.L: LGenus,
    GenusKind.A_HAT: AHatGenus,
    GenusKind.TODD: ToddGenus,
    GenusKind.COSH_HALF: CoshHalf,
}


def register_genus(kind: GenusKind, genus_class: Type[GeneratingFunction], replace: bool = False) -> None:
    """
    Register a generating function class in the registry.

    Raises:
        ValueError: If kind is already registered (and replace is False) or
            genus_class does not inherit from GeneratingFunction
    """
    if kind in GENUS_REGISTRY and not replace:
        raise ValueError(f"Genus kind '{kind.value}' is already registered")

    if not issubclass(genus_class, GeneratingFunction):
        raise ValueError("Genus class must inherit from GeneratingFunction")

    GENUS_REGISTRY[kind] = genus_class
    lgr.info(f"Registered genus: {kind.value} -> {genus_class.__name__}")


def get_genus(kind: Union[GenusKind, str]) -> GeneratingFunction:
    """Return an instance of the generating function for kind (enum or CLI spelling)."""
    if not isinstance(kind, GenusKind):
        kind = GenusKind.parse(kind)
    if kind not in GENUS_REGISTRY:
        available = [k.value for k in GENUS_REGISTRY]
        raise UnknownGenusKind(f"No generating function registered for '{kind.value}'. Available: {available}")
    return GENUS_REGISTRY[kind]()


def list_available_genera() -> List[str]:
    """Return registered genus kind names."""
    return [k.value for k in GENUS_REGISTRY]


__all__ = [
    "GeneratingFunction",
    "GenusKind",
    "RootConvention",
    "GENUS_REGISTRY",
    "bernoulli_number",
    "register_genus",
    "get_genus",
    "list_available_genera",
]
