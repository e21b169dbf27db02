from __future__ import annotations

import logging
from typing import Optional

import numpy as np
import scipy.linalg

from ..modeles.operations import check_dataset, gradient_ascent, model_for, train_mlp
from ..modeles.types import ModelSpec, Optimiseur, ParameterVector, TrainingConfig, TypeModele
from ..noyau.alea import RngStream
from ..noyau.donnees import LabeledDataset, as_weights
from ..noyau.erreurs import NonConvergedError, SeparationError, ValidationError

logger = logging.getLogger(__name__)

# tolérance relative d'acceptation d'un pas : près de l'optimum, le gain
# attendu est du même ordre que l'arrondi de l'objectif
_TOLERANCE_OBJECTIF: float = 1e-14


def _direction_newton(hessien: np.ndarray, gradient: np.ndarray) -> np.ndarray:
    """Résout (−H) Δ = g ; moindres carrés si −H n'est pas définie positive."""
    try:
        facteur = scipy.linalg.cho_factor(-hessien, check_finite=False)
        return scipy.linalg.cho_solve(facteur, gradient, check_finite=False)
    except (scipy.linalg.LinAlgError, ValueError):
        return np.linalg.lstsq(-hessien, gradient, rcond=None)[0]


def fit_weighted_mle(
    spec: ModelSpec,
    data: LabeledDataset,
    xi: object,
    cfg: TrainingConfig = TrainingConfig(),
    seed: Optional[RngStream] = None,
    init: Optional[np.ndarray] = None,
) -> ParameterVector:
    """θ̂_b = argmax_θ Σ ξ_i ln p̂_{Y_i}(X_i; θ).

    Newton (GLM, par défaut) : demi-pas (au plus `cfg.max_halvings`) jusqu'à
    ‖Σ ξ_i ψ_θ̂(X_i, Y_i)‖∞ ≤ `cfg.gradient_tolerance`. Descente de gradient
    (MLP par défaut, GLM sur demande) : délègue à `gradient_ascent`.

    Lève `NonConvergedError` (plafond d'itérations atteint) ou `SeparationError`
    (‖θ‖ > `cfg.separation_norm`, séparation parfaite en logistique).
    """
    check_dataset(spec, data)
    if cfg.optimiseur_pour(spec) is Optimiseur.DESCENTE:
        if spec.kind is TypeModele.MLP:
            if seed is None:
                raise ValidationError("un MLP exige un sous-flux d'entraînement")
            return train_mlp(spec, data, xi, seed, cfg)
        return gradient_ascent(spec, data, xi, cfg, seed)

    modele = model_for(spec)
    X, y = data.features, data.labels
    w = as_weights(xi, data.n)
    masque = modele.penalty_mask().astype(np.float64)
    lam: float = cfg.l2_penalty
    theta = np.zeros(modele.parameter_count()) if init is None else np.array(init, dtype=np.float64)

    def objectif(t: np.ndarray) -> float:
        return float(w @ modele.log_likelihood_terms(t, X, y)) - 0.5 * lam * float(masque @ (t * t))

    valeur: float = objectif(theta)
    norme: float = np.inf
    for iteration in range(cfg.max_iterations + 1):
        gradient = modele.weighted_gradient(theta, X, y, w) - lam * masque * theta
        norme = float(np.max(np.abs(gradient)))
        if norme <= cfg.gradient_tolerance:
            logger.debug("Newton convergé en %d itérations (|g|∞ = %.2e)", iteration, norme)
            return ParameterVector(theta)
        if iteration == cfg.max_iterations:
            break
        hessien = modele.hessian(theta, X, y, w) - lam * np.diag(masque)
        direction = _direction_newton(hessien, gradient)

        pas: float = 1.0
        candidat = theta + direction
        valeur_candidat: float = objectif(candidat)
        seuil: float = valeur - _TOLERANCE_OBJECTIF * (1.0 + abs(valeur))
        demi_pas: int = 0
        while valeur_candidat < seuil and demi_pas < cfg.max_halvings:
            pas /= 2.0
            demi_pas += 1
            candidat = theta + pas * direction
            valeur_candidat = objectif(candidat)
        theta, valeur = candidat, valeur_candidat

        norme_theta: float = float(np.linalg.norm(theta))
        if not np.isfinite(norme_theta) or norme_theta > cfg.separation_norm:
            raise SeparationError(norme_theta)

    raise NonConvergedError(cfg.max_iterations, norme)


def fit_full_data(
    spec: ModelSpec,
    data: LabeledDataset,
    cfg: TrainingConfig = TrainingConfig(),
    seed: Optional[RngStream] = None,
) -> ParameterVector:
    """θ̂ sur les poids uniformes 1/n."""
    return fit_weighted_mle(spec, data, np.full(data.n, 1.0 / data.n), cfg, seed)
