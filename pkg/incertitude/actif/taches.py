from __future__ import annotations

import numpy as np

from ..noyau.alea import DECALAGE_SIMULATION, RngStream
from ..noyau.donnees import LabeledDataset
from ..noyau.erreurs import ValidationError
from .types import PoolState


def _centres(classes: int, rayon: float) -> np.ndarray:
    angles = 2.0 * np.pi * np.arange(classes) / classes
    return rayon * np.column_stack([np.cos(angles), np.sin(angles)])


def gaussian_mixture(
    gen: np.random.Generator,
    taille: int,
    classes: int = 4,
    rayon: float = 2.0,
    ecart_type: float = 1.0,
) -> LabeledDataset:
    """Mélange gaussien 2D : classe k centrée sur le cercle de rayon `rayon` à l'angle 2πk/K."""
    centres = _centres(classes, rayon)
    y = gen.integers(0, classes, size=taille)
    X = centres[y] + ecart_type * gen.standard_normal((taille, 2))
    return LabeledDataset(X, y, classes)


def gaussian_mixture_task(
    master_seed: int,
    classes: int = 4,
    initial_per_class: int = 2,
    pool_size: int = 400,
    test_size: int = 1000,
    rayon: float = 2.0,
    ecart_type: float = 1.0,
) -> PoolState:
    """État initial : `initial_per_class` points étiquetés par classe, un réservoir et un jeu de test."""
    if classes < 2 or initial_per_class < 1 or pool_size < 1 or test_size < 1:
        raise ValidationError("paramètres de tâche invalides")
    gen = RngStream(master_seed, DECALAGE_SIMULATION).generator()
    centres = _centres(classes, rayon)
    y_init = np.repeat(np.arange(classes), initial_per_class)
    X_init = centres[y_init] + ecart_type * gen.standard_normal((y_init.shape[0], 2))
    labeled = LabeledDataset(X_init, y_init, classes)
    pool = gaussian_mixture(gen, pool_size, classes, rayon, ecart_type)
    test = gaussian_mixture(gen, test_size, classes, rayon, ecart_type)
    return PoolState(labeled=labeled, pool=pool, test=test)
