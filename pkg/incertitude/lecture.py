"""Lecture des jeux de données CSV (en-tête, colonne `label`, caractéristiques numériques)."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from .noyau.donnees import LabeledDataset
from .noyau.erreurs import DatasetFormatError

logger = logging.getLogger(__name__)

COLONNE_ETIQUETTE: str = "label"

Chemin = Union[str, Path]


def _lire_brut(path: Chemin) -> pd.DataFrame:
    chemin = Path(path)
    if not chemin.is_file():
        raise DatasetFormatError(f"fichier introuvable : {chemin}")
    try:
        brut = pd.read_csv(
            chemin,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError as exc:
        raise DatasetFormatError("fichier vide", ligne=1) from exc
    except (pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise DatasetFormatError(f"CSV illisible : {exc}") from exc
    brut.columns = [str(c).strip() for c in brut.columns]
    if brut.shape[0] == 0:
        raise DatasetFormatError("aucune ligne de données après l'en-tête", ligne=1)
    return brut


def _numerique(colonne: pd.Series, nom: str) -> np.ndarray:
    """Convertit une colonne texte ; signale la première cellule non numérique ou non finie."""
    valeurs = pd.to_numeric(colonne.str.strip(), errors="coerce").to_numpy(dtype=np.float64)
    fautives = np.flatnonzero(~np.isfinite(valeurs))
    if fautives.size:
        i: int = int(fautives[0])
        # ligne 1 = en-tête
        raise DatasetFormatError(f"valeur non numérique ou non finie {colonne.iloc[i]!r} dans la colonne {nom!r}", ligne=i + 2)
    return valeurs


def _etiquettes(colonne: pd.Series) -> np.ndarray:
    valeurs = _numerique(colonne, COLONNE_ETIQUETTE)
    fautives = np.flatnonzero((valeurs != np.round(valeurs)) | (valeurs < 0))
    if fautives.size:
        i: int = int(fautives[0])
        raise DatasetFormatError(f"étiquette {colonne.iloc[i]!r} hors de {{0, 1, …}}", ligne=i + 2)
    return valeurs.astype(np.int64)


def parse_dataset_csv(path: Chemin, class_count: Optional[int] = None) -> LabeledDataset:
    """Jeu de données n×d ; K = max(label) + 1 sauf si `class_count` est imposé.

    L'ordre des lignes et des colonnes est conservé. Une classe absente de
    {0, …, K−1} est signalée par un avertissement.
    """
    brut = _lire_brut(path)
    if COLONNE_ETIQUETTE not in brut.columns:
        raise DatasetFormatError(f"colonne {COLONNE_ETIQUETTE!r} absente de l'en-tête", ligne=1)
    noms = [c for c in brut.columns if c != COLONNE_ETIQUETTE]
    if not noms:
        raise DatasetFormatError("aucune colonne de caractéristiques", ligne=1)
    X = np.column_stack([_numerique(brut[c], c) for c in noms])
    y = _etiquettes(brut[COLONNE_ETIQUETTE])

    k: int = int(y.max()) + 1
    if class_count is not None:
        if k > class_count:
            i = int(np.argmax(y >= class_count))
            raise DatasetFormatError(f"étiquette {y[i]} hors de {{0, …, {class_count - 1}}}", ligne=i + 2)
        k = class_count
    absentes = sorted(set(range(k)) - set(np.unique(y).tolist()))
    if absentes:
        logger.warning("%s : classes sans exemple %s", Path(path).name, absentes)
    return LabeledDataset(X, y, k)


@dataclass(frozen=True)
class EvaluationPoints:
    """Points de test : caractéristiques et, si la colonne `label` existe, étiquettes."""

    features: np.ndarray
    labels: Optional[np.ndarray]

    @property
    def n(self) -> int:
        return int(self.features.shape[0])


def read_test_points(path: Chemin) -> EvaluationPoints:
    """Comme `parse_dataset_csv`, mais la colonne `label` est facultative."""
    brut = _lire_brut(path)
    noms = [c for c in brut.columns if c != COLONNE_ETIQUETTE]
    if not noms:
        raise DatasetFormatError("aucune colonne de caractéristiques", ligne=1)
    X = np.column_stack([_numerique(brut[c], c) for c in noms])
    y = _etiquettes(brut[COLONNE_ETIQUETTE]) if COLONNE_ETIQUETTE in brut.columns else None
    return EvaluationPoints(X, y)
