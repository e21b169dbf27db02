"""Enveloppe de résultats et écriture atomique (CSV des enregistrements + méta JSON)."""
from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Union

import pandas as pd

logger = logging.getLogger(__name__)

FORMAT_FLOTTANT: str = "%.17g"
SUFFIXE_META: str = ".meta.json"


@dataclass
class ResultEnvelope:
    """Résultat d'une commande.

    Attributs
    ---------
    meta : Dict[str, Any]
        Version, configuration effective, graine, durée ; écrit dans le fichier JSON annexe.
    records : pd.DataFrame
        Table principale, une ligne par point de test ou par étape.
    tables : Dict[str, pd.DataFrame]
        Tables secondaires, écrites sous `<out>.<nom>.csv`.
    """

    meta: Dict[str, Any]
    records: pd.DataFrame
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)


def records_frame(lignes: List[Mapping[str, Any]], colonnes: List[str]) -> pd.DataFrame:
    """DataFrame aux colonnes fixées (table vide comprise)."""
    return pd.DataFrame(list(lignes), columns=colonnes)


def artifact_paths(out: Union[str, Path], envelope: ResultEnvelope) -> Dict[str, Path]:
    """Chemins de tous les fichiers produits pour `out`, par rôle."""
    principal = Path(out)
    chemins: Dict[str, Path] = {"records": principal, "meta": principal.with_name(principal.stem + SUFFIXE_META)}
    for nom in envelope.tables:
        chemins[nom] = principal.with_name(f"{principal.stem}.{nom}{principal.suffix or '.csv'}")
    return chemins


def _csv(table: pd.DataFrame) -> str:
    return table.to_csv(index=False, float_format=FORMAT_FLOTTANT, lineterminator="\n")


def write_envelope(envelope: ResultEnvelope, out: Union[str, Path]) -> Dict[str, Path]:
    """Écrit tous les fichiers dans des temporaires puis les renomme.

    Aucun fichier final n'est touché tant que tous les contenus n'ont pas été
    sérialisés ; chaque renommage est atomique.
    """
    chemins = artifact_paths(out, envelope)
    contenus: Dict[str, str] = {"records": _csv(envelope.records)}
    for nom, table in envelope.tables.items():
        contenus[nom] = _csv(table)
    contenus["meta"] = json.dumps(envelope.meta, indent=2, sort_keys=True, ensure_ascii=False, default=str) + "\n"

    temporaires: Dict[str, Path] = {}
    try:
        for role, texte in contenus.items():
            dst = chemins[role]
            dst.parent.mkdir(parents=True, exist_ok=True)
            tmp = dst.with_suffix(dst.suffix + ".tmp~")
            tmp.write_text(texte, encoding="utf-8")
            temporaires[role] = tmp
        for role, tmp in temporaires.items():
            os.replace(tmp, chemins[role])
    finally:
        for tmp in temporaires.values():
            try:
                tmp.unlink()
            except FileNotFoundError:
                pass
    logger.info("résultats écrits dans %s", chemins["records"])
    return chemins
