"""Estimateurs d'information mutuelle sur des ensembles de prédictions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .noyau.erreurs import DimensionError, NumericalError, ValidationError
from .noyau.probabilite import (
    PredictionMatrix,
    ProbabilityVector,
    entropy,
    mean_prediction,
    row_entropies,
    verifier_simplexe,
)

# borne basse tolérée pour les écarts de Jensen dus à l'arrondi
TOLERANCE_JENSEN: float = 1e-12
TOLERANCE_DECOMPOSITION: float = 1e-10


@dataclass(frozen=True)
class MiEstimate:
    """I = H(moyenne des prédictions) − moyenne des H(prédictions), en nats.

    `mi` est ramené à 0 lorsque l'écart brut est dans [−1e-12, 0).
    """

    mi: float
    total_entropy: float
    mean_entropy: float
    member_count: int


def _information(total: float, moyenne: float) -> float:
    brut: float = total - moyenne
    if brut < -TOLERANCE_JENSEN:
        raise NumericalError(f"information mutuelle négative ({brut:.3e}) : inégalité de Jensen violée")
    return max(brut, 0.0)


def mutual_information(m: PredictionMatrix) -> MiEstimate:
    """Estimateur bootstrap de l'incertitude épistémique en un point de test."""
    total: float = entropy(mean_prediction(m))
    entropies = row_entropies(m.rows)
    moyenne: float = 0.0
    for h in entropies:
        moyenne += float(h)
    moyenne /= m.member_count
    return MiEstimate(_information(total, moyenne), total, moyenne, m.member_count)


def deep_ensemble_mi(seed_predictions: PredictionMatrix) -> MiEstimate:
    """Même calcul que `mutual_information` ; les lignes proviennent de graines
    d'entraînement différentes sur le jeu de données complet."""
    return mutual_information(seed_predictions)


@dataclass(frozen=True)
class MiBatch:
    """Résultats de `mutual_information_batch`, un élément par point de test."""

    mi: np.ndarray
    total_entropy: np.ndarray
    mean_entropy: np.ndarray
    member_count: int

    def __len__(self) -> int:
        return int(self.mi.shape[0])

    def estimate(self, j: int) -> MiEstimate:
        return MiEstimate(float(self.mi[j]), float(self.total_entropy[j]), float(self.mean_entropy[j]), self.member_count)


def mutual_information_batch(probs: np.ndarray) -> MiBatch:
    """Information mutuelle pour N points de test à la fois (tableau B×N×K)."""
    probs = np.asarray(probs, dtype=np.float64)
    if probs.ndim != 3 or probs.shape[0] < 1:
        raise DimensionError(f"tableau B×N×K attendu, forme reçue {probs.shape}")
    verifier_simplexe(probs)
    moyenne_pred = probs.mean(axis=0)
    total = row_entropies(moyenne_pred)
    moyenne = row_entropies(probs).mean(axis=0)
    brut = total - moyenne
    if np.any(brut < -TOLERANCE_JENSEN):
        raise NumericalError(f"information mutuelle négative ({brut.min():.3e}) : inégalité de Jensen violée")
    return MiBatch(np.maximum(brut, 0.0), total, moyenne, int(probs.shape[0]))


# ---------------------------------------------------------------------------
# Décomposition rééchantillonnage / graines
# ---------------------------------------------------------------------------

CelluleLike = Union[ProbabilityVector, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class PredictionGrid:
    """Prédictions p̂(D_n^b, s) : B jeux bootstrap × S graines × K classes."""

    cells: np.ndarray

    def __post_init__(self) -> None:
        cells = np.array(self.cells, dtype=np.float64, copy=True)
        if cells.ndim != 3:
            raise DimensionError(f"grille B×S×K rectangulaire attendue, forme reçue {cells.shape}")
        if cells.shape[0] < 2 or cells.shape[1] < 2:
            raise ValidationError("la grille exige B >= 2 et S >= 2")
        verifier_simplexe(cells)
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_cells(cls, lignes: Sequence[Sequence[CelluleLike]]) -> "PredictionGrid":
        """Construit la grille depuis une liste de listes de vecteurs ; refuse les grilles irrégulières."""
        largeurs = {len(ligne) for ligne in lignes}
        if len(largeurs) != 1:
            raise DimensionError(f"grille irrégulière : longueurs de lignes {sorted(largeurs)}")
        return cls(np.array([[getattr(c, "probs", c) for c in ligne] for ligne in lignes], dtype=np.float64))

    @property
    def dataset_count(self) -> int:
        return int(self.cells.shape[0])

    @property
    def seed_count(self) -> int:
        return int(self.cells.shape[1])

    def flattened(self) -> PredictionMatrix:
        return PredictionMatrix(self.cells.reshape(-1, self.cells.shape[2]))


@dataclass(frozen=True)
class MiDecomposition:
    total: MiEstimate
    resampling: float
    seeds: float
    dataset_count: int
    seed_count: int


def decompose_mi(grid: PredictionGrid) -> MiDecomposition:
    """Sépare l'information totale en une part « rééchantillonnage » et une part « graines ».

    q_b = moyenne sur s des cellules (b, s), q = moyenne des q_b ;
    rééchantillonnage = H(q) − moyenne_b H(q_b) ;
    graines = moyenne_b [H(q_b) − moyenne_s H(cellule(b, s))].
    """
    cells = grid.cells
    q_b = cells.mean(axis=1)
    q = q_b.mean(axis=0)
    h_q: float = float(row_entropies(q))
    h_qb = row_entropies(q_b)
    h_cellules = row_entropies(cells)

    resampling: float = h_q - float(h_qb.mean())
    seeds: float = float((h_qb - h_cellules.mean(axis=1)).mean())
    total_brut: float = h_q - float(h_cellules.mean())

    ecart: float = abs(resampling + seeds - total_brut)
    if ecart > TOLERANCE_DECOMPOSITION:
        raise NumericalError(f"identité de décomposition violée ({ecart:.3e})")
    if seeds < -TOLERANCE_JENSEN:
        raise NumericalError(f"composante graines négative ({seeds:.3e})")

    total = mutual_information(grid.flattened())
    return MiDecomposition(total, resampling, max(seeds, 0.0), grid.dataset_count, grid.seed_count)


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------

def variance_ratio_mi(m: PredictionMatrix) -> float:
    """Approximation de Taylor d'ordre 2 : ½ Σ_k Var[p_k] / E[p_k] (variance de population)."""
    if m.member_count < 2:
        raise ValidationError("variance_ratio_mi exige B >= 2")
    rows = m.rows
    return float(0.5 * np.sum(rows.var(axis=0) / rows.mean(axis=0)))


def true_class_spread(m: PredictionMatrix, true_label: int) -> float:
    """Écart-type de population de la probabilité de la vraie classe."""
    if m.member_count < 2:
        raise ValidationError("true_class_spread exige B >= 2")
    if not 0 <= int(true_label) < m.class_count:
        raise ValidationError(f"classe {true_label} hors de {{0, …, {m.class_count - 1}}}")
    return float(m.rows[:, int(true_label)].std())
