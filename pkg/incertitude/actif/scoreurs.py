from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Callable, Dict, Optional, Type

import numpy as np

from ..bootstrap.ajustement import fit_weighted_mle
from ..bootstrap.ensemble import build_bootstrap_ensemble, member_predictions_batch
from ..information import mutual_information_batch
from ..noyau.alea import DECALAGE_SCORES, RngStream, training_stream
from ..noyau.erreurs import ValidationError
from .types import AcquisitionConfig, PoolState, TypeScoreur


class Scoreur(ABC):
    """Interface des règles d'acquisition.

    `scores` reçoit la graine de l'étape (dérivée de la graine maître et du
    numéro d'étape) et retourne un score par point du réservoir.
    """

    @abstractmethod
    def scores(self, state: PoolState, cfg: AcquisitionConfig, graine_etape: int) -> np.ndarray:
        raise NotImplementedError


_SCOREURS: Dict[TypeScoreur, Type[Scoreur]] = {}


def enregistrer(type_s: TypeScoreur) -> Callable[[Type[Scoreur]], Type[Scoreur]]:
    def deco(classe: Type[Scoreur]) -> Type[Scoreur]:
        _SCOREURS[type_s] = classe
        return classe

    return deco


def scoreur_pour(type_s: TypeScoreur) -> Scoreur:
    classe: Optional[Type[Scoreur]] = _SCOREURS.get(type_s)
    if classe is None:
        raise ValidationError(f"Aucun scoreur enregistré pour {type_s.value}")
    return classe()


@enregistrer(TypeScoreur.BOOTSTRAP_MI)
class ScoreurBootstrap(Scoreur):
    """Information mutuelle d'un ensemble bootstrap de B membres ajustés sur les points étiquetés."""

    def scores(self, state: PoolState, cfg: AcquisitionConfig, graine_etape: int) -> np.ndarray:
        ensemble = build_bootstrap_ensemble(
            cfg.spec, state.labeled, cfg.members, cfg.scheme, cfg.training, graine_etape, cfg.workers
        )
        probs = member_predictions_batch(ensemble.members, cfg.spec, state.pool_features())
        return mutual_information_batch(probs).mi


@enregistrer(TypeScoreur.ENSEMBLE_MI)
class ScoreurEnsemble(Scoreur):
    """Information mutuelle de S modèles ajustés sur tous les points étiquetés avec des graines différentes."""

    def scores(self, state: PoolState, cfg: AcquisitionConfig, graine_etape: int) -> np.ndarray:
        n: int = state.labeled.n
        uniformes = np.full(n, 1.0 / n)
        membres = tuple(
            fit_weighted_mle(cfg.spec, state.labeled, uniformes, cfg.training, seed=training_stream(graine_etape, s))
            for s in range(cfg.members)
        )
        probs = member_predictions_batch(membres, cfg.spec, state.pool_features())
        return mutual_information_batch(probs).mi


@enregistrer(TypeScoreur.ALEATOIRE)
class ScoreurAleatoire(Scoreur):
    def scores(self, state: PoolState, cfg: AcquisitionConfig, graine_etape: int) -> np.ndarray:
        return RngStream(graine_etape, DECALAGE_SCORES).generator().random(state.pool_size)
