from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .erreurs import DimensionError, ValidationError


@dataclass(frozen=True)
class LabeledDataset:
    """Jeu de données étiqueté : n vecteurs de d caractéristiques et leurs classes.

    Attributs
    ---------
    features : np.ndarray
        Matrice n×d de réels finis.
    labels : np.ndarray
        Vecteur de n entiers dans {0, …, K−1}.
    class_count : int
        Nombre de classes K (peut dépasser max(labels) + 1).
    """

    features: np.ndarray
    labels: np.ndarray
    class_count: int

    def __post_init__(self) -> None:
        x = np.array(self.features, dtype=np.float64, copy=True)
        if x.ndim == 1:
            x = x.reshape(-1, 1)
        y = np.array(self.labels, copy=True)
        if x.ndim != 2:
            raise DimensionError(f"matrice n×d attendue, forme reçue {x.shape}")
        if y.ndim != 1 or y.shape[0] != x.shape[0]:
            raise DimensionError(f"{y.shape} étiquettes pour {x.shape[0]} lignes")
        if x.shape[0] < 1:
            raise ValidationError("jeu de données vide")
        if not np.all(np.isfinite(x)):
            raise ValidationError("caractéristiques non finies")
        if y.dtype.kind == "f":
            if not np.all(y == np.round(y)):
                raise ValidationError("étiquettes non entières")
        y = y.astype(np.int64)
        k: int = int(self.class_count)
        if k < 1:
            raise ValidationError("au moins une classe est requise")
        if np.any(y < 0) or np.any(y >= k):
            raise ValidationError(f"étiquette hors de {{0, …, {k - 1}}}")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "features", x)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "class_count", k)

    @property
    def n(self) -> int:
        return int(self.features.shape[0])

    @property
    def d(self) -> int:
        return int(self.features.shape[1])

    def classes_present(self) -> np.ndarray:
        return np.unique(self.labels)

    def subset(self, indices: Sequence[int]) -> "LabeledDataset":
        idx = np.asarray(indices, dtype=np.int64)
        return LabeledDataset(self.features[idx], self.labels[idx], self.class_count)

    def with_row(self, x: np.ndarray, y: int) -> "LabeledDataset":
        """Copie augmentée d'une ligne (l'ordre existant est conservé)."""
        features = np.vstack([self.features, np.asarray(x, dtype=np.float64).reshape(1, -1)])
        labels = np.append(self.labels, int(y))
        return LabeledDataset(features, labels, self.class_count)

    def without_row(self, i: int) -> "LabeledDataset":
        garde = np.ones(self.n, dtype=bool)
        garde[i] = False
        return LabeledDataset(self.features[garde], self.labels[garde], self.class_count)


def as_weights(xi: object, n: Optional[int] = None) -> np.ndarray:
    """Tableau de poids brut depuis un `WeightVector` ou un tableau ; contrôle la longueur."""
    brut = getattr(xi, "weights", xi)
    poids = np.asarray(brut, dtype=np.float64)
    if poids.ndim != 1:
        raise DimensionError(f"vecteur de poids attendu, forme reçue {poids.shape}")
    if n is not None and poids.shape[0] != n:
        raise DimensionError(f"{poids.shape[0]} poids pour {n} observations")
    return poids
