from __future__ import annotations

from typing import Callable, Dict, Optional, Type

from ..noyau.erreurs import ValidationError
from .base import Modele
from .types import ModelSpec, TypeModele

_REGISTRE: Dict[TypeModele, Type[Modele]] = {}


def enregistrer(type_m: TypeModele) -> Callable[[Type[Modele]], Type[Modele]]:
    """Décorateur enregistrant une implémentation pour un `TypeModele`."""

    def deco(classe: Type[Modele]) -> Type[Modele]:
        _REGISTRE[type_m] = classe
        return classe

    return deco


def modele_pour(spec: ModelSpec) -> Modele:
    """Instancie le modèle correspondant à `spec`.

    Lève `ValidationError` si aucune implémentation n'est enregistrée.
    """
    # importe les implémentations pour peupler le registre
    from . import logistique, mlp, softmax  # noqa: F401

    classe: Optional[Type[Modele]] = _REGISTRE.get(spec.kind)
    if classe is None:
        raise ValidationError(f"Aucune implémentation enregistrée pour le type {spec.kind.value}")
    return classe(spec)
