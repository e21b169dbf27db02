"""Approximation des réajustements bootstrap par fonctions d'influence."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from .bootstrap.ajustement import fit_full_data
from .bootstrap.ensemble import member_predictions
from .bootstrap.poids import SchemaPoids, WeightVector, sample_weights
from .information import MiEstimate, mutual_information
from .modeles.mlp import PerceptronMulticouche
from .modeles.operations import check_dataset, model_for
from .modeles.types import ModelSpec, ParameterVector, TrainingConfig
from .noyau.alea import RngStream, replicate_stream, training_stream
from .noyau.donnees import LabeledDataset, as_weights
from .noyau.erreurs import DimensionError, SingularMatrixError, ValidationError

logger = logging.getLogger(__name__)

AMORTISSEMENT_DEFAUT: float = 1e-5
SEUIL_CONDITIONNEMENT: float = 1e14
COUCHES_LIBRES_DEFAUT: int = 2


@dataclass(frozen=True)
class InfluenceCache:
    """θ̂, hessien moyen H et vecteurs d'influence IF_i = (−H + λ Id)^{-1} ψ_i.

    Pour un MLP, H et les IF ne couvrent que le bloc `parameter_indices`
    (dernières couches) ; les autres coordonnées de θ̂ restent figées.
    """

    spec: ModelSpec
    theta_hat: ParameterVector
    hessian: np.ndarray
    damping: float
    influence_vectors: np.ndarray
    parameter_indices: np.ndarray

    def __post_init__(self) -> None:
        h = np.asarray(self.hessian, dtype=np.float64)
        iv = np.asarray(self.influence_vectors, dtype=np.float64)
        idx = np.asarray(self.parameter_indices, dtype=np.int64)
        q: int = idx.shape[0]
        if h.shape != (q, q) or iv.ndim != 2 or iv.shape[1] != q:
            raise DimensionError(f"hessien {h.shape} et influences {iv.shape} pour un bloc de {q} paramètres")
        if np.any(idx < 0) or np.any(idx >= len(self.theta_hat)):
            raise DimensionError("indices de paramètres hors de θ")
        if float(np.max(np.abs(h - h.T), initial=0.0)) > 1e-9 * max(1.0, float(np.max(np.abs(h), initial=0.0))):
            raise ValidationError("hessien non symétrique")
        if not np.all(np.isfinite(iv)):
            raise ValidationError("vecteurs d'influence non finis")
        if self.damping < 0.0:
            raise ValidationError("l'amortissement doit être >= 0")
        for nom, tableau in (("hessian", h), ("influence_vectors", iv), ("parameter_indices", idx)):
            tableau = np.array(tableau, copy=True)
            tableau.setflags(write=False)
            object.__setattr__(self, nom, tableau)

    @property
    def n(self) -> int:
        return int(self.influence_vectors.shape[0])


def build_influence_cache(
    spec: ModelSpec,
    data: LabeledDataset,
    cfg: TrainingConfig = TrainingConfig(),
    damping: float = AMORTISSEMENT_DEFAUT,
    trailing_layers: int = COUCHES_LIBRES_DEFAUT,
    seed: Optional[RngStream] = None,
) -> InfluenceCache:
    """Ajuste θ̂ sur les poids uniformes puis résout les n systèmes avec une seule factorisation.

    H = (1/n) Σ ∇²_θ ln p̂_{Y_i}(X_i; θ̂), moins la pénalité L2 éventuelle. Lève
    `SingularMatrixError` si −H + λ Id n'est pas définie positive ou si son
    conditionnement dépasse 1e14.
    """
    if damping < 0.0:
        raise ValidationError("l'amortissement doit être >= 0")
    check_dataset(spec, data)
    modele = model_for(spec)
    theta_hat = fit_full_data(spec, data, cfg, seed=seed or training_stream(0, 0))
    t = theta_hat.theta
    X, y = data.features, data.labels
    w = np.full(data.n, 1.0 / data.n)

    if isinstance(modele, PerceptronMulticouche):
        indices = modele.trailing_block(trailing_layers)
        hessien = modele.hessian(t, X, y, w, indices)
    else:
        indices = np.arange(modele.parameter_count())
        hessien = modele.hessian(t, X, y, w)
    scores = modele.score_batch(t, X, y)[:, indices]
    if cfg.l2_penalty > 0.0:
        hessien = hessien - cfg.l2_penalty * np.diag(modele.penalty_mask()[indices].astype(np.float64))
    hessien = 0.5 * (hessien + hessien.T)

    systeme = -hessien + damping * np.eye(indices.shape[0])
    valeurs = scipy.linalg.eigh(systeme, eigvals_only=True)
    conditionnement: float = float(valeurs[-1] / valeurs[0]) if valeurs[0] > 0.0 else float("inf")
    if conditionnement > SEUIL_CONDITIONNEMENT:
        raise SingularMatrixError(conditionnement, SEUIL_CONDITIONNEMENT)
    facteur = scipy.linalg.cho_factor(systeme)
    influences = scipy.linalg.cho_solve(facteur, scores.T).T
    logger.debug("cache d'influence : %d points, bloc de %d paramètres, cond = %.3e", data.n, indices.shape[0], conditionnement)
    return InfluenceCache(spec, theta_hat, hessien, float(damping), influences, indices)


def if_shift_parameters(cache: InfluenceCache, xi: Union[WeightVector, np.ndarray, Sequence[float]]) -> ParameterVector:
    """θ_approx = θ̂ + Σ_i (ξ_i − 1/n) IF_i, linéaire en (ξ − uniforme)."""
    w = as_weights(xi)
    if w.shape[0] != cache.n:
        raise DimensionError(f"{w.shape[0]} poids pour {cache.n} observations")
    theta = np.array(cache.theta_hat.theta, copy=True)
    theta[cache.parameter_indices] += (w - 1.0 / cache.n) @ cache.influence_vectors
    return ParameterVector(theta)


def if_bootstrap_ensemble(
    cache: InfluenceCache,
    B: int,
    scheme: SchemaPoids = SchemaPoids.MULTINOMIAL,
    master_seed: int = 0,
) -> Tuple[ParameterVector, ...]:
    """B modèles approchés ; le tirage b utilise le même sous-flux qu'un réplicat bootstrap exact."""
    if B < 2:
        raise ValidationError("B doit être >= 2")
    return tuple(
        if_shift_parameters(cache, sample_weights(cache.n, replicate_stream(master_seed, b), scheme))
        for b in range(B)
    )


def if_bootstrap_mi(
    cache: InfluenceCache,
    spec: ModelSpec,
    x_test: Union[np.ndarray, Sequence[float]],
    B: int,
    scheme: SchemaPoids = SchemaPoids.MULTINOMIAL,
    master_seed: int = 0,
) -> MiEstimate:
    membres = if_bootstrap_ensemble(cache, B, scheme, master_seed)
    return mutual_information(member_predictions(membres, spec, np.asarray(x_test, dtype=np.float64)))
