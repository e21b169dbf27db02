from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .erreurs import SimplexError

EPS_CLIP: float = 1e-12
TOLERANCE_SOMME: float = 1e-9

# marge relative sur les bornes : une renormalisation peut déplacer une entrée
# clippée de l'ordre de EPS_CLIP² seulement
_MARGE_BORNES: float = 1e-9


def verifier_simplexe(probs: np.ndarray) -> None:
    """Lève `SimplexError` si une ligne de `probs` sort du simplexe clippé."""
    if probs.size == 0:
        raise SimplexError("vecteur de probabilités vide")
    if not np.all(np.isfinite(probs)):
        raise SimplexError("probabilités non finies")
    bas: float = EPS_CLIP * (1.0 - _MARGE_BORNES)
    haut: float = 1.0 - EPS_CLIP * (1.0 - _MARGE_BORNES)
    if np.any(probs < bas) or np.any(probs > haut):
        raise SimplexError(f"entrée hors de [{EPS_CLIP:g}, 1 - {EPS_CLIP:g}] : min={probs.min():.3e}, max={probs.max():.3e}")
    sommes = probs.sum(axis=-1)
    ecart: float = float(np.max(np.abs(sommes - 1.0)))
    if ecart > TOLERANCE_SOMME:
        raise SimplexError(f"la somme des probabilités s'écarte de 1 de {ecart:.3e}")


def _figer(tableau: np.ndarray) -> np.ndarray:
    tableau = np.array(tableau, dtype=np.float64, copy=True)
    tableau.setflags(write=False)
    return tableau


@dataclass(frozen=True)
class ProbabilityVector:
    """Point intérieur du simplexe à K classes.

    Attributs
    ---------
    probs : np.ndarray
        Vecteur de longueur K, entrées dans [EPS_CLIP, 1 - EPS_CLIP], somme 1 à 1e-9 près.
        Le tableau est en lecture seule : la valeur est immuable après construction.
    """

    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = _figer(self.probs)
        if probs.ndim != 1:
            raise SimplexError(f"un vecteur de probabilités est attendu, forme reçue {probs.shape}")
        verifier_simplexe(probs)
        object.__setattr__(self, "probs", probs)

    @property
    def class_count(self) -> int:
        return int(self.probs.shape[0])

    def __len__(self) -> int:
        return self.class_count

    def __eq__(self, autre: object) -> bool:
        return isinstance(autre, ProbabilityVector) and np.array_equal(self.probs, autre.probs)

    def __hash__(self) -> int:
        return hash(self.probs.tobytes())


@dataclass(frozen=True)
class PredictionMatrix:
    """Prédictions de B membres d'un ensemble en un point de test (B×K).

    Les lignes sont ordonnées (membre 0 en premier) ; toutes les réductions
    parcourent les lignes par indice croissant.
    """

    rows: np.ndarray

    def __post_init__(self) -> None:
        rows = _figer(self.rows)
        if rows.ndim != 2 or rows.shape[0] < 1:
            raise SimplexError(f"matrice B×K non vide attendue, forme reçue {rows.shape}")
        verifier_simplexe(rows)
        object.__setattr__(self, "rows", rows)

    @property
    def member_count(self) -> int:
        return int(self.rows.shape[0])

    @property
    def class_count(self) -> int:
        return int(self.rows.shape[1])

    def row(self, b: int) -> ProbabilityVector:
        return ProbabilityVector(self.rows[b])

    def permuted(self, ordre: Iterable[int]) -> "PredictionMatrix":
        return PredictionMatrix(self.rows[list(ordre)])


VecteurLike = Union[ProbabilityVector, Sequence[float], np.ndarray]


def as_probability_vector(p: VecteurLike) -> ProbabilityVector:
    return p if isinstance(p, ProbabilityVector) else ProbabilityVector(np.asarray(p, dtype=np.float64))


def entropy(p: VecteurLike) -> float:
    """Entropie de Shannon en nats : −Σ p_k ln p_k, dans [0, ln K]."""
    probs: np.ndarray = as_probability_vector(p).probs
    return float(-np.sum(probs * np.log(probs)))


def row_entropies(rows: np.ndarray) -> np.ndarray:
    """Entropies ligne par ligne (dernier axe = classes), sans validation."""
    return -np.sum(rows * np.log(rows), axis=-1)


def clip_and_normalize(raw: Union[Sequence[float], np.ndarray]) -> ProbabilityVector:
    """Projette un vecteur positif sur le simplexe clippé.

    Normalise, clippe dans [EPS_CLIP, 1 - EPS_CLIP], renormalise, puis reclippe
    (la dernière étape ne déplace la somme que d'environ EPS_CLIP²).
    """
    valeurs = np.asarray(raw, dtype=np.float64)
    if valeurs.ndim != 1 or valeurs.size == 0:
        raise SimplexError("vecteur brut non vide attendu")
    if not np.all(np.isfinite(valeurs)):
        raise SimplexError("vecteur brut non fini")
    if np.any(valeurs < 0.0):
        raise SimplexError("vecteur brut avec entrées négatives")
    total: float = float(valeurs.sum())
    if total <= 0.0:
        raise SimplexError("vecteur brut de somme nulle")
    return ProbabilityVector(clip_rows(valeurs / total))


def clip_rows(probs: np.ndarray) -> np.ndarray:
    """Version vectorisée du clipping (dernier axe = classes) pour des lignes déjà normalisées."""
    clippe = np.clip(probs, EPS_CLIP, 1.0 - EPS_CLIP)
    clippe = clippe / clippe.sum(axis=-1, keepdims=True)
    return np.clip(clippe, EPS_CLIP, 1.0 - EPS_CLIP)


def mean_prediction(m: PredictionMatrix) -> ProbabilityVector:
    """Moyenne colonne par colonne des lignes, sommées par indice croissant."""
    rows: np.ndarray = m.rows
    if np.all(rows == rows[0]):
        return ProbabilityVector(rows[0])
    total = np.zeros(rows.shape[1], dtype=np.float64)
    for ligne in rows:
        total += ligne
    return ProbabilityVector(total / rows.shape[0])
