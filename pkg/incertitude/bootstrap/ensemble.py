from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..modeles.operations import predict_rows
from ..modeles.types import ModelSpec, ParameterVector, TrainingConfig, TypeModele
from ..noyau.alea import DECALAGE_REPRISE, RngStream, replicate_stream, training_stream
from ..noyau.donnees import LabeledDataset
from ..noyau.erreurs import BootstrapFailureError, NumericalError, ValidationError
from ..noyau.probabilite import PredictionMatrix
from .ajustement import fit_full_data, fit_weighted_mle
from .poids import SchemaPoids, WeightVector, sample_weights

logger = logging.getLogger(__name__)

PART_ECHECS_TOLEREE: float = 0.10


@dataclass(frozen=True)
class BootstrapEnsemble:
    """Ensemble Θ_b des estimateurs bootstrap.

    Attributs
    ---------
    members : Tuple[ParameterVector, ...]
        θ̂_b des réplicats réussis, par indice de réplicat croissant.
    weight_draws : Tuple[WeightVector, ...]
        Poids ayant produit chaque membre (même ordre).
    scheme : SchemaPoids
    master_seed : int
    failed : Tuple[int, ...]
        Indices des réplicats abandonnés après une reprise.
    """

    members: Tuple[ParameterVector, ...]
    weight_draws: Tuple[WeightVector, ...]
    scheme: SchemaPoids
    master_seed: int
    failed: Tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if len(self.members) != len(self.weight_draws):
            raise ValidationError("membres et tirages de poids de longueurs différentes")
        if len(self.members) < 2:
            raise ValidationError("un ensemble bootstrap exige au moins deux membres")

    @property
    def size(self) -> int:
        return len(self.members)

    def parameter_matrix(self) -> np.ndarray:
        return np.vstack([m.theta for m in self.members])


def _replicat(
    b: int,
    spec: ModelSpec,
    data: LabeledDataset,
    scheme: SchemaPoids,
    cfg: TrainingConfig,
    master_seed: int,
    depart: Optional[np.ndarray],
) -> Tuple[int, Optional[ParameterVector], Optional[WeightVector]]:
    """Ajuste le réplicat b ; une reprise sur sous-flux neuf en cas d'échec numérique."""
    flux: List[Tuple[RngStream, RngStream]] = [
        (replicate_stream(master_seed, b), training_stream(master_seed, b)),
        (RngStream(master_seed, DECALAGE_REPRISE + b), training_stream(master_seed, DECALAGE_REPRISE + b)),
    ]
    for essai, (flux_poids, flux_entrainement) in enumerate(flux):
        xi = sample_weights(data.n, flux_poids, scheme)
        try:
            theta = fit_weighted_mle(spec, data, xi, cfg, seed=flux_entrainement, init=depart)
            return b, theta, xi
        except NumericalError as exc:
            if essai == 0:
                logger.warning("réplicat %d en échec (%s) : reprise sur un sous-flux neuf", b, exc)
            else:
                logger.warning("réplicat %d abandonné après reprise (%s)", b, exc)
    return b, None, None


def build_bootstrap_ensemble(
    spec: ModelSpec,
    data: LabeledDataset,
    B: int,
    scheme: SchemaPoids = SchemaPoids.DIRICHLET,
    cfg: TrainingConfig = TrainingConfig(),
    master_seed: int = 0,
    workers: int = 1,
) -> BootstrapEnsemble:
    """Boucle « pour b = 1…B » : tirer ξ, ajuster θ̂_b, conserver.

    Le réplicat b utilise RngStream(master_seed, b) pour ses poids et
    RngStream(master_seed, 2^32 + b) pour l'entraînement (MLP). Les résultats
    sont agrégés par indice croissant : identiques quel que soit `workers`.
    """
    if B < 2:
        raise ValidationError("B doit être >= 2")
    scheme = SchemaPoids.depuis_option(scheme)

    depart: Optional[np.ndarray] = None
    if spec.kind is not TypeModele.MLP and cfg.warm_start:
        try:
            depart = fit_full_data(spec, data, cfg).theta
        except NumericalError as exc:
            logger.warning("ajustement complet en échec (%s) : départ à zéro pour les réplicats", exc)

    args = (spec, data, scheme, cfg, master_seed, depart)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            resultats = list(pool.map(lambda b: _replicat(b, *args), range(B)))
    else:
        resultats = [_replicat(b, *args) for b in range(B)]

    resultats.sort(key=lambda r: r[0])
    membres = tuple(r[1] for r in resultats if r[1] is not None)
    tirages = tuple(r[2] for r in resultats if r[2] is not None)
    echecs = tuple(r[0] for r in resultats if r[1] is None)
    if len(echecs) > PART_ECHECS_TOLEREE * B or len(membres) < 2:
        raise BootstrapFailureError(echecs, B)
    if echecs:
        logger.info("%d réplicats sur %d abandonnés", len(echecs), B)
    return BootstrapEnsemble(membres, tirages, scheme, master_seed, echecs)  # type: ignore[arg-type]


def ensemble_predictions(ensemble: BootstrapEnsemble, spec: ModelSpec, x_test: np.ndarray) -> PredictionMatrix:
    """Ligne b = predict_proba(spec, θ̂_b, x_test), ordre des membres conservé."""
    return member_predictions(ensemble.members, spec, x_test)


def member_predictions(members: Tuple[ParameterVector, ...], spec: ModelSpec, x_test: np.ndarray) -> PredictionMatrix:
    x = np.asarray(x_test, dtype=np.float64).reshape(1, -1)
    return PredictionMatrix(np.vstack([predict_rows(spec, m, x) for m in members]))


def member_predictions_batch(members: Tuple[ParameterVector, ...], spec: ModelSpec, X: np.ndarray) -> np.ndarray:
    """Prédictions B×N×K de tous les membres sur les N lignes de X."""
    return np.stack([predict_rows(spec, m, X) for m in members])


def parameter_covariance(ensemble: BootstrapEnsemble) -> np.ndarray:
    """Covariance empirique (dénominateur B − 1) des paramètres des membres."""
    return np.atleast_2d(np.cov(ensemble.parameter_matrix(), rowvar=False))
