from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from ..noyau.erreurs import DimensionError, ValidationError
from ..noyau.probabilite import clip_rows
from .types import ModelSpec, ParameterVector


class Modele(ABC):
    """Interface abstraite des classifieurs paramétriques.

    Méthodes à implémenter
    ----------------------
    - `parameter_count()` : longueur p de θ.
    - `predict_batch(theta, X)` : probabilités n×K (non clippées).
    - `score_batch(theta, X, y)` : scores ψ_θ(x_i, y_i), matrice n×p.
    - `hessian(theta, X, y, w)` : ∇² de Σ w_i ln p̂_{y_i}(x_i; θ), matrice p×p.
    - `prediction_gradient(theta, x)` : ∂p̂(x; θ)/∂θ, matrice K×p.

    Les GLM fournissent en plus `conditional_information` (information de
    Fisher conditionnelle moyenne), qui n'existe pas en forme close pour le MLP.
    """

    def __init__(self, spec: ModelSpec) -> None:
        self.spec: ModelSpec = spec

    # ------------------------------------------------------------------ à fournir

    @abstractmethod
    def parameter_count(self) -> int:
        raise NotImplementedError

    @abstractmethod
    def predict_batch(self, theta: np.ndarray, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @abstractmethod
    def score_batch(self, theta: np.ndarray, X: np.ndarray, y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @abstractmethod
    def hessian(self, theta: np.ndarray, X: np.ndarray, y: np.ndarray, w: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @abstractmethod
    def prediction_gradient(self, theta: np.ndarray, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def conditional_information(self, theta: np.ndarray, X: np.ndarray) -> np.ndarray:
        """Moyenne sur les lignes de X de E_y[ψψᵀ | x] (GLM uniquement)."""
        raise ValidationError(f"pas d'information de Fisher analytique pour {self.spec.kind.value}")

    def penalty_mask(self) -> np.ndarray:
        """Coordonnées soumises à la pénalité L2 (toutes par défaut)."""
        return np.ones(self.parameter_count(), dtype=bool)

    def initial_parameters(self, rng: Optional[np.random.Generator], init_scale: float) -> np.ndarray:
        return np.zeros(self.parameter_count(), dtype=np.float64)

    # ------------------------------------------------------------------ communs

    def weighted_gradient(self, theta: np.ndarray, X: np.ndarray, y: np.ndarray, w: np.ndarray) -> np.ndarray:
        """Σ w_i ψ_θ(x_i, y_i)."""
        return w @ self.score_batch(theta, X, y)

    def log_likelihood_terms(self, theta: np.ndarray, X: np.ndarray, y: np.ndarray) -> np.ndarray:
        """ln p̂_{y_i}(x_i; θ) avec probabilités clippées."""
        probs = clip_rows(self.predict_batch(theta, X))
        return np.log(probs[np.arange(probs.shape[0]), y])

    def check_theta(self, theta: ParameterVector | np.ndarray) -> np.ndarray:
        brut = theta.theta if isinstance(theta, ParameterVector) else np.asarray(theta, dtype=np.float64)
        if brut.shape != (self.parameter_count(),):
            raise DimensionError(f"θ de longueur {brut.shape} pour {self.parameter_count()} paramètres attendus")
        if not np.all(np.isfinite(brut)):
            raise ValidationError("paramètres non finis")
        return brut

    def check_features(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.shape[1] != self.spec.input_dim:
            raise DimensionError(f"x de dimension {X.shape[1]} pour input_dim = {self.spec.input_dim}")
        return X


def design(X: np.ndarray, intercept: bool) -> np.ndarray:
    """Matrice de design z = (1, x) ou z = x."""
    if not intercept:
        return X
    return np.hstack([np.ones((X.shape[0], 1)), X])


def sigmoid(eta: np.ndarray) -> np.ndarray:
    """Sigmoïde numériquement stable."""
    out = np.empty_like(eta, dtype=np.float64)
    pos = eta >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-eta[pos]))
    e = np.exp(eta[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def softmax(logits: np.ndarray) -> np.ndarray:
    decale = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(decale)
    return e / e.sum(axis=-1, keepdims=True)
