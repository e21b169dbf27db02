from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from ..bootstrap.poids import SchemaPoids
from ..modeles.types import ModelSpec, TrainingConfig
from ..noyau.donnees import LabeledDataset
from ..noyau.erreurs import ValidationError


class TypeScoreur(str, Enum):
    """Règles de score du réservoir."""

    BOOTSTRAP_MI = "bootstrap-mi"
    ENSEMBLE_MI = "ensemble-mi"
    ALEATOIRE = "random"

    @classmethod
    def depuis_option(cls, valeur: "str | TypeScoreur") -> "TypeScoreur":
        try:
            return cls(str(getattr(valeur, "value", valeur)).strip().lower())
        except ValueError as exc:
            raise ValidationError(f"Scoreur inconnu: {valeur!r}") from exc


@dataclass(frozen=True)
class PoolState:
    """État de la boucle active.

    Attributs
    ---------
    labeled : LabeledDataset
        Points étiquetés (initiaux puis acquis, dans l'ordre d'acquisition).
    pool : LabeledDataset
        Réservoir initial, inchangé ; ses étiquettes ne sont lues qu'à l'acquisition.
    test : LabeledDataset
    pool_ids : Tuple[int, ...]
        Lignes de `pool` encore disponibles ; la position j dans ce tuple est
        l'« indice de réservoir » j. Par défaut toutes les lignes.
    acquired_indices : Tuple[int, ...]
        Lignes de `pool` acquises, dans l'ordre d'acquisition.
    step : int
        Nombre d'acquisitions effectuées.
    """

    labeled: LabeledDataset
    pool: LabeledDataset
    test: LabeledDataset
    pool_ids: Optional[Tuple[int, ...]] = None
    acquired_indices: Tuple[int, ...] = ()
    step: int = 0

    def __post_init__(self) -> None:
        ids = tuple(range(self.pool.n)) if self.pool_ids is None else tuple(int(i) for i in self.pool_ids)
        acquis = tuple(int(i) for i in self.acquired_indices)
        if len(set(acquis)) != len(acquis) or len(set(ids)) != len(ids):
            raise ValidationError("indices de réservoir dupliqués")
        if set(acquis) & set(ids):
            raise ValidationError("réservoir et points acquis non disjoints")
        if any(i < 0 or i >= self.pool.n for i in ids + acquis):
            raise ValidationError("indice hors du réservoir initial")
        if self.step != len(acquis):
            raise ValidationError("step doit égaler le nombre d'acquisitions")
        if self.labeled.d != self.pool.d or self.test.d != self.pool.d:
            raise ValidationError("dimensions incohérentes entre étiquetés, réservoir et test")
        object.__setattr__(self, "pool_ids", ids)
        object.__setattr__(self, "acquired_indices", acquis)

    @property
    def pool_size(self) -> int:
        return len(self.pool_ids)

    def pool_features(self) -> np.ndarray:
        """Caractéristiques du réservoir restant, seules visibles des scoreurs."""
        return self.pool.features[list(self.pool_ids)].reshape(-1, self.pool.d)

    def reveal(self, j: int) -> "PoolState":
        """Déplace le point j du réservoir vers les étiquetés, étiquette révélée."""
        if not 0 <= j < self.pool_size:
            raise ValidationError(f"indice {j} hors du réservoir de {self.pool_size} points")
        ligne: int = self.pool_ids[j]
        return PoolState(
            labeled=self.labeled.with_row(self.pool.features[ligne], int(self.pool.labels[ligne])),
            pool=self.pool,
            test=self.test,
            pool_ids=self.pool_ids[:j] + self.pool_ids[j + 1:],
            acquired_indices=self.acquired_indices + (ligne,),
            step=self.step + 1,
        )


@dataclass(frozen=True)
class AcquisitionConfig:
    """Réglages d'une expérience d'apprentissage actif.

    `members` est B pour bootstrap-mi et S pour ensemble-mi.
    """

    scorer: TypeScoreur
    budget: int
    spec: ModelSpec
    training: TrainingConfig = field(default_factory=lambda: TrainingConfig(l2_penalty=1e-2))
    master_seed: int = 0
    members: int = 5
    scheme: SchemaPoids = SchemaPoids.DIRICHLET
    workers: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "scorer", TypeScoreur.depuis_option(self.scorer))
        object.__setattr__(self, "scheme", SchemaPoids.depuis_option(self.scheme))
        if self.budget < 0:
            raise ValidationError("budget doit être >= 0")
        if self.scorer is not TypeScoreur.ALEATOIRE and self.members < 2:
            raise ValidationError("les scoreurs par information mutuelle exigent au moins deux membres")
        if self.workers < 1:
            raise ValidationError("workers doit être >= 1")
