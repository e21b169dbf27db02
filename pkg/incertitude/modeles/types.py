from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from ..noyau.erreurs import ValidationError


class TypeModele(str, Enum):
    """Familles de modèles disponibles.

    Hérite de `str` pour une sérialisation JSON directe (valeur = nom stable).
    """

    LOGISTIQUE = "binary-logistic"
    SOFTMAX = "softmax"
    MLP = "mlp"

    @classmethod
    def depuis_option(cls, valeur: str) -> "TypeModele":
        """Accepte aussi l'alias CLI « logistic »."""
        brut: str = str(valeur).strip().lower()
        if brut == "logistic":
            return cls.LOGISTIQUE
        try:
            return cls(brut)
        except ValueError as exc:
            raise ValidationError(f"Type de modèle inconnu: {valeur!r}") from exc

    @property
    def est_glm(self) -> bool:
        return self is not TypeModele.MLP


class Optimiseur(str, Enum):
    NEWTON = "newton"
    DESCENTE = "gradient-descent"

    @classmethod
    def depuis_option(cls, valeur: "str | Optimiseur") -> "Optimiseur":
        try:
            return cls(getattr(valeur, "value", str(valeur).strip().lower()))
        except ValueError as exc:
            raise ValidationError(f"Optimiseur inconnu: {valeur!r}") from exc


@dataclass(frozen=True)
class ModelSpec:
    """Description d'une famille de modèles p̂(·; θ).

    Attributs
    ---------
    kind : TypeModele
    input_dim : int
        Dimension d des caractéristiques.
    class_count : int
        Nombre de classes K (2 obligatoirement pour la logistique binaire).
    hidden_layers : Tuple[int, ...]
        Largeurs des couches cachées (MLP uniquement).
    includes_intercept : bool
        Ordonnée à l'origine pour les GLM (le MLP a toujours des biais).
    """

    kind: TypeModele
    input_dim: int
    class_count: int
    hidden_layers: Tuple[int, ...] = ()
    includes_intercept: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", TypeModele(self.kind))
        object.__setattr__(self, "hidden_layers", tuple(int(h) for h in self.hidden_layers))
        if self.input_dim < 1:
            raise ValidationError("input_dim doit être >= 1")
        if self.class_count < 2:
            raise ValidationError("au moins deux classes sont requises")
        if self.kind is TypeModele.LOGISTIQUE and self.class_count != 2:
            raise ValidationError("la logistique binaire exige K = 2")
        if self.kind is TypeModele.MLP:
            if not self.hidden_layers or any(h < 1 for h in self.hidden_layers):
                raise ValidationError("un MLP exige des couches cachées de largeur >= 1")
        elif self.hidden_layers:
            raise ValidationError("hidden_layers est réservé au MLP")

    @property
    def is_glm(self) -> bool:
        return self.kind.est_glm


@dataclass(frozen=True)
class TrainingConfig:
    """Réglages d'optimisation.

    `optimizer` vide : Newton pour un GLM, descente de gradient pour un MLP
    (voir `optimiseur_pour`). Newton : `max_iterations`, `gradient_tolerance`,
    `max_halvings`, `separation_norm`, `warm_start`. Descente de gradient : `epochs`,
    `step_size`, `batch_size` (None = lot complet), `init_scale`.
    `l2_penalty` retire (λ/2)‖θ‖² (hors ordonnées/biais) à l'objectif pondéré.
    """

    optimizer: Optional[Optimiseur] = None
    max_iterations: int = 100
    gradient_tolerance: float = 1e-8
    step_size: float = 0.1
    epochs: int = 500
    batch_size: Optional[int] = None
    init_scale: float = 1.0
    max_halvings: int = 30
    separation_norm: float = 1e6
    warm_start: bool = True
    l2_penalty: float = 0.0

    def __post_init__(self) -> None:
        if self.optimizer is not None:
            object.__setattr__(self, "optimizer", Optimiseur.depuis_option(self.optimizer))
        if self.gradient_tolerance <= 0 or self.step_size <= 0 or self.init_scale <= 0:
            raise ValidationError("tolérances, pas et échelle d'initialisation doivent être > 0")
        if self.max_iterations < 1 or self.epochs < 1:
            raise ValidationError("les nombres d'itérations doivent être >= 1")
        if self.batch_size is not None and self.batch_size < 1:
            raise ValidationError("batch_size doit être >= 1")
        if self.l2_penalty < 0:
            raise ValidationError("l2_penalty doit être >= 0")

    def optimiseur_pour(self, spec: "ModelSpec") -> Optimiseur:
        """Optimiseur effectif ; Newton exige un GLM."""
        if self.optimizer is None:
            return Optimiseur.NEWTON if spec.is_glm else Optimiseur.DESCENTE
        if self.optimizer is Optimiseur.NEWTON and not spec.is_glm:
            raise ValidationError("Newton est réservé aux GLM : utiliser gradient-descent pour un MLP")
        return self.optimizer


@dataclass(frozen=True)
class ParameterVector:
    """Vecteur plat θ, immuable, de longueur fixée par la spécification du modèle."""

    theta: np.ndarray = field()

    def __post_init__(self) -> None:
        theta = np.array(self.theta, dtype=np.float64, copy=True).reshape(-1)
        if not np.all(np.isfinite(theta)):
            raise ValidationError("paramètres non finis")
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)

    def __len__(self) -> int:
        return int(self.theta.shape[0])

    def __eq__(self, autre: object) -> bool:
        return isinstance(autre, ParameterVector) and np.array_equal(self.theta, autre.theta)

    def __hash__(self) -> int:
        return hash(self.theta.tobytes())
