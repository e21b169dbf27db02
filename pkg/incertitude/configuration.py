"""Configuration d'une exécution (défauts < fichier key=value < options CLI) et journalisation."""
from __future__ import annotations

import logging.config
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Callable, Dict, Mapping, Optional, Tuple, Union

from dotenv import dotenv_values, load_dotenv

from .bootstrap.poids import SchemaPoids
from .modeles.types import Optimiseur, TypeModele
from .noyau.erreurs import ValidationError

NIVEAUX: frozenset[str] = frozenset({"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"})


def _level(env_name: str, default: str = "INFO") -> str:
    val = os.getenv(env_name, default).upper()
    return val if val in NIVEAUX else default


def logging_config() -> Dict[str, Any]:
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "console": {
                "format": "%(asctime)s %(levelname)s %(name)s: %(message)s",
                "datefmt": "%Y-%m-%dT%H:%M:%S%z",
            },
        },
        "handlers": {
            "console": {"class": "logging.StreamHandler", "formatter": "console", "stream": "ext://sys.stderr"},
        },
        "loggers": {
            "incertitude": {
                "handlers": ["console"],
                "level": _level("INCERTITUDE_LOG_LEVEL", "INFO"),
                "propagate": False,
            },
        },
    }


def configure_logging(env_file: Optional[Path] = None) -> None:
    """Charge `.env` (sans écraser l'environnement) puis applique la configuration."""
    load_dotenv(env_file or Path.cwd() / ".env", override=False)
    logging.config.dictConfig(logging_config())


@dataclass(frozen=True)
class RunConfig:
    """Paramètres d'une commande ; tout champ a une valeur par défaut.

    `weights` vide signifie « schéma par défaut de la commande » (multinomial
    pour `influence`, Dirichlet sinon) ; `effective_for` le résout.
    """

    seed: int = 0
    model: str = "logistic"
    intercept: bool = True
    bootstrap: int = 100
    seeds: int = 5
    weights: str = ""
    n: int = 1000
    n_grid: Tuple[int, ...] = (100, 400, 1600)
    x_grid: Tuple[float, ...] = (-2.0, -1.0, 0.0, 1.0, 2.0)
    theta0: Tuple[float, ...] = (0.5, 1.5)
    mcmc_steps: int = 60000
    burn_in: int = 10000
    thinning: int = 25
    damping: float = 1e-5
    budget: int = 30
    repetitions: int = 10
    pool_size: int = 400
    hidden: Tuple[int, ...] = (16,)
    epochs: int = 500
    step_size: float = 0.1
    optimizer: str = ""
    l2: float = 0.0
    active_l2: float = 1e-2
    fisher_samples: int = 200000
    redraws: int = 50
    test_points: int = 50
    workers: int = 1
    out: str = "resultats.csv"

    def __post_init__(self) -> None:
        TypeModele.depuis_option(self.model)
        if self.weights:
            SchemaPoids.depuis_option(self.weights)
        if self.optimizer:
            Optimiseur.depuis_option(self.optimizer)
        minimums: Dict[str, int] = {
            "bootstrap": 2, "seeds": 2, "n": 1, "thinning": 1, "repetitions": 1, "pool_size": 1,
            "epochs": 1, "fisher_samples": 1, "redraws": 2, "test_points": 1, "workers": 1,
        }
        for nom, minimum in minimums.items():
            if getattr(self, nom) < minimum:
                raise ValidationError(f"{nom} doit être >= {minimum}")
        if self.budget < 0 or self.burn_in < 0:
            raise ValidationError("budget et burn_in doivent être >= 0")
        if self.mcmc_steps <= self.burn_in:
            raise ValidationError("mcmc_steps doit dépasser burn_in")
        if not self.n_grid or any(v < 1 for v in self.n_grid):
            raise ValidationError("n_grid doit contenir des tailles >= 1")
        if not self.x_grid:
            raise ValidationError("x_grid ne peut pas être vide")
        if len(self.theta0) < 2:
            raise ValidationError("theta0 exige une ordonnée et au moins une pente")
        if not self.hidden or any(h < 1 for h in self.hidden):
            raise ValidationError("hidden doit contenir des largeurs >= 1")
        if self.damping < 0 or self.l2 < 0 or self.active_l2 < 0 or self.step_size <= 0:
            raise ValidationError("damping, l2 et active_l2 doivent être >= 0, step_size > 0")
        if not str(self.out).strip():
            raise ValidationError("out ne peut pas être vide")

    # ------------------------------------------------------------------ sources

    @classmethod
    def from_sources(cls, config_path: Optional[Union[str, Path]] = None, overrides: Optional[Mapping[str, Any]] = None) -> "RunConfig":
        """Défauts, puis le fichier `config_path` (key=value), puis `overrides` (options CLI)."""
        valeurs: Dict[str, Any] = {}
        if config_path is not None:
            chemin = Path(config_path)
            if not chemin.is_file():
                raise ValidationError(f"fichier de configuration introuvable : {chemin}")
            valeurs.update(_normaliser(dotenv_values(chemin)))
        valeurs.update(_normaliser(overrides or {}))
        return cls(**valeurs)

    def effective_for(self, commande: str) -> "RunConfig":
        if self.weights:
            return self
        defaut = SchemaPoids.MULTINOMIAL if commande == "influence" else SchemaPoids.DIRICHLET
        return replace(self, weights=defaut.value)

    def as_dict(self) -> Dict[str, Any]:
        return {cle: list(v) if isinstance(v, tuple) else v for cle, v in asdict(self).items()}


# ---------------------------------------------------------------------------
# Normalisation des valeurs brutes
# ---------------------------------------------------------------------------

_VRAI: frozenset[str] = frozenset({"1", "true", "oui", "yes", "on"})
_FAUX: frozenset[str] = frozenset({"0", "false", "non", "no", "off"})


def _booleen(brut: Any) -> bool:
    if isinstance(brut, bool):
        return brut
    texte = str(brut).strip().lower()
    if texte in _VRAI:
        return True
    if texte in _FAUX:
        return False
    raise ValueError(f"booléen attendu, reçu {brut!r}")


def _liste(element: Callable[[Any], Any]) -> Callable[[Any], Tuple[Any, ...]]:
    def convertir(brut: Any) -> Tuple[Any, ...]:
        if isinstance(brut, (list, tuple)):
            return tuple(element(v) for v in brut)
        morceaux = [m for m in str(brut).replace(";", ",").split(",") if m.strip()]
        return tuple(element(m.strip()) for m in morceaux)

    return convertir


def _entier(brut: Any) -> int:
    if isinstance(brut, bool):
        raise ValueError("entier attendu")
    if isinstance(brut, int):
        return brut
    texte = str(brut).strip()
    valeur = float(texte)
    if not valeur.is_integer():
        raise ValueError(f"entier attendu, reçu {brut!r}")
    return int(valeur)


def _convertisseur(defaut: Any) -> Callable[[Any], Any]:
    if isinstance(defaut, bool):
        return _booleen
    if isinstance(defaut, int):
        return _entier
    if isinstance(defaut, float):
        return lambda v: float(str(v).strip()) if not isinstance(v, (int, float)) else float(v)
    if isinstance(defaut, tuple):
        return _liste(_entier if defaut and isinstance(defaut[0], int) else float)
    return lambda v: str(v).strip()


_DEFAUTS: Dict[str, Any] = {f.name: f.default for f in fields(RunConfig)}


def _normaliser(brut: Mapping[str, Any]) -> Dict[str, Any]:
    """Clés insensibles à la casse, tirets et soulignés équivalents ; valeurs typées.

    Lève `ValidationError` pour une clé inconnue ou une valeur non convertible.
    """
    propre: Dict[str, Any] = {}
    for cle_brute, valeur in brut.items():
        cle: str = str(cle_brute).strip().lower().replace("-", "_")
        if cle not in _DEFAUTS:
            raise ValidationError(f"clé de configuration inconnue : {cle_brute!r}")
        if valeur is None:
            raise ValidationError(f"valeur manquante pour {cle_brute!r}")
        try:
            propre[cle] = _convertisseur(_DEFAUTS[cle])(valeur)
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"valeur invalide pour {cle}: {valeur!r}") from exc
    return propre
