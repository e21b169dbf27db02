from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..noyau.alea import RngStream
from ..noyau.erreurs import ValidationError

TOLERANCE_POIDS: float = 1e-9


class SchemaPoids(str, Enum):
    """Loi des poids de rééchantillonnage."""

    DIRICHLET = "dirichlet"
    MULTINOMIAL = "multinomial"

    @classmethod
    def depuis_option(cls, valeur: "str | SchemaPoids") -> "SchemaPoids":
        try:
            return cls(str(getattr(valeur, "value", valeur)).strip().lower())
        except ValueError as exc:
            raise ValidationError(f"Schéma de poids inconnu: {valeur!r}") from exc


@dataclass(frozen=True)
class WeightVector:
    """n poids positifs de somme 1 définissant un réplicat bootstrap.

    Dirichlet : entrées strictement positives. Multinomial : multiples entiers de 1/n.
    """

    weights: np.ndarray
    scheme: SchemaPoids

    def __post_init__(self) -> None:
        w = np.array(self.weights, dtype=np.float64, copy=True).reshape(-1)
        schema = SchemaPoids.depuis_option(self.scheme)
        if w.size < 1 or not np.all(np.isfinite(w)) or np.any(w < 0.0):
            raise ValidationError("poids vides, négatifs ou non finis")
        if abs(float(w.sum()) - 1.0) > TOLERANCE_POIDS:
            raise ValidationError(f"somme des poids = {w.sum():.12f} ≠ 1")
        if schema is SchemaPoids.DIRICHLET and np.any(w <= 0.0):
            raise ValidationError("poids de Dirichlet nuls")
        if schema is SchemaPoids.MULTINOMIAL:
            comptes = w * w.size
            if np.any(np.abs(comptes - np.round(comptes)) > TOLERANCE_POIDS * w.size):
                raise ValidationError("poids multinomiaux non multiples de 1/n")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "scheme", schema)

    def __len__(self) -> int:
        return int(self.weights.shape[0])

    @classmethod
    def uniform(cls, n: int, scheme: SchemaPoids = SchemaPoids.DIRICHLET) -> "WeightVector":
        """Poids 1/n : le jeu de données d'origine."""
        return cls(np.full(n, 1.0 / n), scheme)


def sample_dirichlet_weights(n: int, rng: RngStream) -> WeightVector:
    """Dir(1, …, 1) par n exponentielles standard normalisées par leur somme."""
    if n < 1:
        raise ValidationError("n doit être >= 1")
    g = rng.generator().standard_exponential(n)
    return WeightVector(g / g.sum(), SchemaPoids.DIRICHLET)


def sample_multinomial_weights(n: int, rng: RngStream) -> WeightVector:
    """Comptes de n tirages uniformes sur {0, …, n−1}, divisés par n."""
    if n < 1:
        raise ValidationError("n doit être >= 1")
    tirages = rng.generator().integers(0, n, size=n)
    comptes = np.bincount(tirages, minlength=n)
    return WeightVector(comptes / n, SchemaPoids.MULTINOMIAL)


def sample_weights(n: int, rng: RngStream, scheme: SchemaPoids) -> WeightVector:
    if SchemaPoids.depuis_option(scheme) is SchemaPoids.MULTINOMIAL:
        return sample_multinomial_weights(n, rng)
    return sample_dirichlet_weights(n, rng)
