from __future__ import annotations

import logging
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np

from ..noyau.alea import RngStream
from ..noyau.donnees import LabeledDataset, as_weights
from ..noyau.erreurs import DimensionError, DivergenceError, ValidationError
from ..noyau.probabilite import ProbabilityVector, clip_rows
from .base import Modele
from .registre import modele_pour
from .types import ModelSpec, ParameterVector, TrainingConfig, TypeModele

logger = logging.getLogger(__name__)

ThetaLike = Union[ParameterVector, np.ndarray, Sequence[float]]


@lru_cache(maxsize=64)
def model_for(spec: ModelSpec) -> Modele:
    """Instance (partagée, sans état mutable) du modèle décrit par `spec`."""
    return modele_pour(spec)


def _theta(modele: Modele, theta: ThetaLike) -> np.ndarray:
    if not isinstance(theta, (ParameterVector, np.ndarray)):
        theta = np.asarray(theta, dtype=np.float64)
    return modele.check_theta(theta)


def predict_rows(spec: ModelSpec, theta: ThetaLike, X: np.ndarray) -> np.ndarray:
    """Prédictions clippées n×K pour toutes les lignes de X."""
    modele = model_for(spec)
    return clip_rows(modele.predict_batch(_theta(modele, theta), modele.check_features(X)))


def predict_proba(spec: ModelSpec, theta: ThetaLike, x: Union[Sequence[float], np.ndarray]) -> ProbabilityVector:
    """p̂(x; θ) projeté sur le simplexe clippé."""
    x_arr = np.asarray(x, dtype=np.float64).reshape(1, -1)
    return ProbabilityVector(predict_rows(spec, theta, x_arr)[0])


def weighted_log_likelihood(spec: ModelSpec, theta: ThetaLike, data: LabeledDataset, xi: object) -> float:
    """Σ_i ξ_i ln p̂_{Y_i}(X_i; θ) avec probabilités clippées."""
    modele = model_for(spec)
    w = as_weights(xi, data.n)
    termes = modele.log_likelihood_terms(_theta(modele, theta), modele.check_features(data.features), data.labels)
    return float(w @ termes)


def score(spec: ModelSpec, theta: ThetaLike, x: Union[Sequence[float], np.ndarray], y: int) -> np.ndarray:
    """ψ_θ(x, y) = ∂ ln p̂_y(x; θ) / ∂θ."""
    modele = model_for(spec)
    if not 0 <= int(y) < spec.class_count:
        raise ValidationError(f"classe {y} hors de {{0, …, {spec.class_count - 1}}}")
    X = modele.check_features(np.asarray(x, dtype=np.float64).reshape(1, -1))
    return modele.score_batch(_theta(modele, theta), X, np.array([int(y)]))[0]


def gradient_ascent(
    spec: ModelSpec,
    data: LabeledDataset,
    xi: object,
    cfg: TrainingConfig = TrainingConfig(),
    seed: Optional[RngStream] = None,
) -> ParameterVector:
    """Descente de gradient pondérée sur −Σ ξ_i ln p̂, pour toute famille.

    Initialisation et mélange des mini-lots ne dépendent que de `seed` : même
    (données, poids, graine) -> même θ bit à bit. Sans `seed`, départ à 0 et
    lot complet.
    """
    modele = model_for(spec)
    X = modele.check_features(data.features)
    y = data.labels
    n: int = data.n
    w = as_weights(xi, n)
    gen = seed.generator() if seed is not None else None
    theta = modele.initial_parameters(gen, cfg.init_scale)
    masque = modele.penalty_mask().astype(np.float64)
    lot: int = n if cfg.batch_size is None or gen is None else min(cfg.batch_size, n)

    for epoque in range(cfg.epochs):
        if lot >= n:
            lots = [np.arange(n)]
        else:
            ordre = gen.permutation(n)
            lots = [ordre[i:i + lot] for i in range(0, n, lot)]
        for idx in lots:
            gradient = modele.weighted_gradient(theta, X[idx], y[idx], w[idx]) * (n / idx.shape[0])
            if cfg.l2_penalty > 0.0:
                gradient = gradient - cfg.l2_penalty * masque * theta
            theta = theta + cfg.step_size * gradient
        if not np.all(np.isfinite(theta)):
            raise DivergenceError(epoque)
    logger.debug("%s entraîné par descente de gradient (%d époques)", spec.kind.value, cfg.epochs)
    return ParameterVector(theta)


def train_mlp(
    spec: ModelSpec,
    data: LabeledDataset,
    xi: object,
    seed: RngStream,
    cfg: TrainingConfig = TrainingConfig(),
) -> ParameterVector:
    """`gradient_ascent` pour un MLP, dont l'initialisation aléatoire exige `seed`."""
    if spec.kind is not TypeModele.MLP:
        raise ValidationError("train_mlp exige une spécification MLP")
    return gradient_ascent(spec, data, xi, cfg, seed)


def check_dataset(spec: ModelSpec, data: LabeledDataset) -> None:
    if data.d != spec.input_dim:
        raise DimensionError(f"données de dimension {data.d} pour input_dim = {spec.input_dim}")
    if data.class_count > spec.class_count:
        raise DimensionError(f"{data.class_count} classes dans les données pour K = {spec.class_count}")
