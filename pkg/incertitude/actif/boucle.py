from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..bootstrap.ajustement import fit_full_data
from ..modeles.operations import predict_rows
from ..noyau.alea import derive_seed, training_stream
from ..noyau.erreurs import ActiveLearningAborted, NumericalError, ValidationError
from .scoreurs import scoreur_pour
from .types import AcquisitionConfig, PoolState, TypeScoreur

logger = logging.getLogger(__name__)

# contexte de dérivation des graines d'évaluation (distinct des graines de score)
_CLE_EVALUATION: int = 1


@dataclass(frozen=True)
class AccuracyRow:
    acquisitions: int
    n_labeled: int
    accuracy: float


def score_pool(state: PoolState, cfg: AcquisitionConfig) -> np.ndarray:
    """Un score par point du réservoir restant.

    Un jeu étiqueté ne contenant qu'une classe rend les scores par information
    mutuelle dégénérés : l'étape utilise alors des scores aléatoires.
    """
    if state.labeled.n < 1:
        raise ValidationError("le jeu étiqueté est vide")
    graine_etape: int = derive_seed(cfg.master_seed, state.step)
    type_s: TypeScoreur = cfg.scorer
    if type_s is not TypeScoreur.ALEATOIRE and state.labeled.classes_present().shape[0] < 2:
        logger.warning("étape %d : une seule classe étiquetée, scores aléatoires", state.step)
        type_s = TypeScoreur.ALEATOIRE
    scores = np.asarray(scoreur_pour(type_s).scores(state, cfg, graine_etape), dtype=np.float64)
    if scores.shape != (state.pool_size,):
        raise ValidationError(f"{scores.shape} scores pour un réservoir de {state.pool_size} points")
    return scores


def acquire_next(state: PoolState, scores: Sequence[float]) -> Tuple[int, PoolState]:
    """Indice du score maximal (le plus petit en cas d'égalité) et l'état après acquisition."""
    s = np.asarray(scores, dtype=np.float64)
    if state.pool_size == 0:
        raise ValidationError("réservoir vide")
    if s.shape != (state.pool_size,):
        raise ValidationError(f"{s.shape} scores pour un réservoir de {state.pool_size} points")
    j: int = int(np.argmax(s))
    return j, state.reveal(j)


def evaluate_accuracy(state: PoolState, cfg: AcquisitionConfig) -> float:
    """Exactitude sur le jeu de test d'un modèle ajusté sur tous les points étiquetés."""
    graine: int = derive_seed(cfg.master_seed, state.step, _CLE_EVALUATION)
    theta = fit_full_data(cfg.spec, state.labeled, cfg.training, seed=training_stream(graine, 0))
    probs = predict_rows(cfg.spec, theta, state.test.features)
    return float(np.mean(np.argmax(probs, axis=1) == state.test.labels))


def run_active_learning(state: PoolState, cfg: AcquisitionConfig) -> List[AccuracyRow]:
    """Boucle ajuster / scorer / acquérir / évaluer, une ligne par acquisition.

    La première ligne décrit le jeu étiqueté initial. Un échec numérique
    interrompt la boucle avec `ActiveLearningAborted`, qui porte la courbe partielle.
    """
    if cfg.budget > state.pool_size:
        raise ValidationError(f"budget {cfg.budget} supérieur à la taille du réservoir ({state.pool_size})")
    courbe: List[AccuracyRow] = []
    try:
        courbe.append(AccuracyRow(0, state.labeled.n, evaluate_accuracy(state, cfg)))
        for _ in range(cfg.budget):
            scores = score_pool(state, cfg)
            _, state = acquire_next(state, scores)
            courbe.append(AccuracyRow(state.step, state.labeled.n, evaluate_accuracy(state, cfg)))
    except NumericalError as exc:
        raise ActiveLearningAborted(
            f"apprentissage actif interrompu après {len(courbe) - 1 if courbe else 0} acquisitions : {exc}",
            courbe,
        ) from exc
    logger.info(
        "%s : exactitude %.3f -> %.3f en %d acquisitions",
        cfg.scorer.value, courbe[0].accuracy, courbe[-1].accuracy, cfg.budget,
    )
    return courbe
