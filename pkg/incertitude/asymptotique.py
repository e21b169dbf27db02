"""Information mutuelle au premier ordre : information de Fisher et méthode delta."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence, Union

import numpy as np
import scipy.linalg

from .bootstrap.ajustement import fit_full_data
from .modeles.operations import model_for, predict_proba
from .modeles.types import ModelSpec, ParameterVector, TrainingConfig
from .noyau.alea import DECALAGE_SCORES, RngStream
from .noyau.donnees import LabeledDataset
from .noyau.erreurs import DimensionError, SingularMatrixError, ValidationError
from .noyau.probabilite import ProbabilityVector, as_probability_vector

logger = logging.getLogger(__name__)

SEUIL_CONDITIONNEMENT: float = 1e12
TOLERANCE_SYMETRIE: float = 1e-10
TOLERANCE_SEMI_DEFINIE: float = 1e-8

# génère `taille` lignes de caractéristiques à partir d'un générateur numpy
GenerateurCaracteristiques = Callable[[np.random.Generator, int], np.ndarray]


class ModeFisher(str, Enum):
    ANALYTIQUE = "analytic"
    PRODUIT_SCORES = "score-outer-product"


@dataclass(frozen=True)
class FisherInformation:
    """Information de Fisher I(θ0), matrice p×p symétrique semi-définie positive."""

    matrix: np.ndarray
    theta0: ParameterVector
    sample_count_used: int

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=np.float64, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] != len(self.theta0):
            raise DimensionError(f"matrice de Fisher de forme {m.shape} pour {len(self.theta0)} paramètres")
        ecart: float = float(np.max(np.abs(m - m.T)))
        if ecart > TOLERANCE_SYMETRIE * max(1.0, float(np.max(np.abs(m)))):
            raise ValidationError(f"information de Fisher non symétrique (écart {ecart:.3e})")
        m = 0.5 * (m + m.T)
        plus_petite: float = float(scipy.linalg.eigh(m, eigvals_only=True)[0])
        if plus_petite < -TOLERANCE_SEMI_DEFINIE * max(1.0, float(np.max(np.abs(m)))):
            raise ValidationError(f"information de Fisher non semi-définie positive (valeur propre {plus_petite:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def eigenvalues(self) -> np.ndarray:
        return scipy.linalg.eigh(self.matrix, eigvals_only=True)

    @property
    def condition_number(self) -> float:
        valeurs = self.eigenvalues
        if valeurs[0] <= 0.0:
            return float("inf")
        return float(valeurs[-1] / valeurs[0])

    def _verifier_inversible(self) -> None:
        cond: float = self.condition_number
        if cond > SEUIL_CONDITIONNEMENT:
            raise SingularMatrixError(cond, SEUIL_CONDITIONNEMENT)

    def inverse(self) -> np.ndarray:
        """I^{-1}(θ0) par décomposition spectrale ; lève `SingularMatrixError` si mal conditionnée."""
        self._verifier_inversible()
        valeurs, vecteurs = scipy.linalg.eigh(self.matrix)
        inv = (vecteurs / valeurs) @ vecteurs.T
        return 0.5 * (inv + inv.T)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """I^{-1} rhs par factorisation de Cholesky."""
        self._verifier_inversible()
        facteur = scipy.linalg.cho_factor(self.matrix)
        return scipy.linalg.cho_solve(facteur, rhs)


def _caracteristiques(
    spec: ModelSpec,
    source: Union[np.ndarray, GenerateurCaracteristiques],
    gen: np.random.Generator,
    sample_size: Optional[int],
) -> np.ndarray:
    if callable(source):
        if sample_size is None or sample_size < 1:
            raise ValidationError("sample_size >= 1 requis avec un générateur de caractéristiques")
        X = np.asarray(source(gen, sample_size), dtype=np.float64)
    else:
        X = np.asarray(source, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, spec.input_dim)
    if X.shape[0] < 1 or X.shape[1] != spec.input_dim:
        raise DimensionError(f"échantillon de caractéristiques de forme {X.shape} pour input_dim = {spec.input_dim}")
    return X


def fisher_information(
    spec: ModelSpec,
    theta0: Union[ParameterVector, np.ndarray, Sequence[float]],
    features: Union[np.ndarray, GenerateurCaracteristiques],
    mode: Union[ModeFisher, str] = ModeFisher.ANALYTIQUE,
    seed: Optional[RngStream] = None,
    sample_size: Optional[int] = None,
) -> FisherInformation:
    """I(θ0) moyennée sur un échantillon de caractéristiques.

    Mode analytique (GLM) : moyenne de E_y[ψψᵀ | x]. Mode produit des scores :
    moyenne de ψψᵀ avec y tiré de p̂(x; θ0). `features` est une matrice n×d ou
    un générateur appelé avec (générateur numpy, sample_size). Le tirage des y
    et des caractéristiques utilise `seed` (par défaut le sous-flux des scores
    de la graine 0).
    """
    mode = ModeFisher(getattr(mode, "value", mode))
    modele = model_for(spec)
    theta = theta0 if isinstance(theta0, ParameterVector) else ParameterVector(np.asarray(theta0, dtype=np.float64))
    t = modele.check_theta(theta)
    gen = (seed or RngStream(0, DECALAGE_SCORES)).generator()
    X = _caracteristiques(spec, features, gen, sample_size)

    if mode is ModeFisher.ANALYTIQUE:
        if not spec.is_glm:
            raise ValidationError("le mode analytique est réservé aux GLM")
        matrice = modele.conditional_information(t, X)
    else:
        probs = modele.predict_batch(t, X)
        cumul = np.cumsum(probs, axis=1)
        u = gen.random(X.shape[0])
        y = np.minimum((u[:, None] > cumul).sum(axis=1), spec.class_count - 1)
        scores = modele.score_batch(t, X, y)
        matrice = scores.T @ scores / X.shape[0]
    return FisherInformation(matrice, theta, int(X.shape[0]))


def prediction_gradient(
    spec: ModelSpec,
    theta0: Union[ParameterVector, np.ndarray, Sequence[float]],
    x_test: Union[np.ndarray, Sequence[float]],
) -> np.ndarray:
    """∂p̂(x_test; θ0)/∂θ, matrice K×p (analytique pour les GLM, rétropropagée pour le MLP)."""
    modele = model_for(spec)
    t = modele.check_theta(theta0 if isinstance(theta0, ParameterVector) else np.asarray(theta0, dtype=np.float64))
    x = modele.check_features(np.asarray(x_test, dtype=np.float64).reshape(1, -1))[0]
    return modele.prediction_gradient(t, x)


@dataclass(frozen=True)
class DeltaVariances:
    """σ_k² = [G I^{-1} Gᵀ]_{kk} et le gradient G utilisé."""

    sigma_sq: np.ndarray
    gradient: np.ndarray = field(repr=False)


def delta_variances(grad: np.ndarray, fisher: FisherInformation) -> DeltaVariances:
    g = np.asarray(grad, dtype=np.float64)
    if g.ndim != 2 or g.shape[1] != fisher.matrix.shape[0]:
        raise DimensionError(f"gradient de forme {g.shape} pour {fisher.matrix.shape[0]} paramètres")
    solution = fisher.solve(g.T)
    sigma_sq = np.einsum("kp,pk->k", g, solution)
    return DeltaVariances(sigma_sq, g)


def first_order_mi(dv: DeltaVariances, p0: Union[ProbabilityVector, np.ndarray, Sequence[float]], n: int) -> float:
    """(1 / 2n) Σ_k σ_k² / p0_k."""
    if n < 1:
        raise ValidationError("n doit être >= 1")
    probs = as_probability_vector(p0).probs
    if probs.shape[0] != dv.sigma_sq.shape[0]:
        raise DimensionError(f"{probs.shape[0]} probabilités pour {dv.sigma_sq.shape[0]} variances")
    return float(np.sum(dv.sigma_sq / probs) / (2.0 * n))


def binary_first_order_mi(dv: DeltaVariances, p0: Union[ProbabilityVector, np.ndarray, Sequence[float]], n: int) -> float:
    """Forme binaire : σ_1² / (2 n p0_1 (1 − p0_1)), classe 1 = classe positive."""
    if n < 1:
        raise ValidationError("n doit être >= 1")
    probs = as_probability_vector(p0).probs
    if probs.shape[0] != 2 or dv.sigma_sq.shape[0] != 2:
        raise ValidationError("la forme binaire exige K = 2")
    p1: float = float(probs[1])
    return float(dv.sigma_sq[1] / (2.0 * n * p1 * (1.0 - p1)))


@dataclass(frozen=True)
class PlugInContext:
    """θ̂ du jeu complet et I(θ̂) sur les caractéristiques observées (θ0 substitué)."""

    theta_hat: ParameterVector
    fisher: FisherInformation
    n: int


def plug_in_context(spec: ModelSpec, data: LabeledDataset, cfg: TrainingConfig = TrainingConfig()) -> PlugInContext:
    if not spec.is_glm:
        raise ValidationError("la valeur au premier ordre par substitution est réservée aux GLM")
    theta_hat = fit_full_data(spec, data, cfg)
    fisher = fisher_information(spec, theta_hat, data.features, ModeFisher.ANALYTIQUE)
    logger.debug("θ0 remplacé par θ̂ = %s", np.array2string(theta_hat.theta, precision=4))
    return PlugInContext(theta_hat, fisher, data.n)


def plug_in_first_order_mi(
    spec: ModelSpec,
    data: LabeledDataset,
    x_test: Union[np.ndarray, Sequence[float]],
    cfg: TrainingConfig = TrainingConfig(),
    contexte: Optional[PlugInContext] = None,
) -> float:
    """Information au premier ordre évaluée en θ̂ plutôt qu'en θ0 inconnu.

    `contexte` permet de réutiliser θ̂ et I(θ̂) pour plusieurs points de test.
    """
    base = contexte or plug_in_context(spec, data, cfg)
    dv = delta_variances(prediction_gradient(spec, base.theta_hat, x_test), base.fisher)
    return first_order_mi(dv, predict_proba(spec, base.theta_hat, x_test), base.n)
