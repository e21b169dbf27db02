"""Oracle bayésien : log-postérieur gaussien et Metropolis à marche aléatoire."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from .bootstrap.ajustement import fit_full_data
from .bootstrap.ensemble import member_predictions
from .information import MiEstimate, mutual_information
from .modeles.operations import check_dataset, model_for
from .modeles.types import ModelSpec, ParameterVector, TrainingConfig
from .noyau.alea import RngStream
from .noyau.donnees import LabeledDataset
from .noyau.erreurs import DimensionError, NumericalError, PathologicalPosteriorError, ValidationError

logger = logging.getLogger(__name__)

PAS_TOTAL_DEFAUT: int = 60000
RODAGE_DEFAUT: int = 10000
AMINCISSEMENT_DEFAUT: int = 25
ECHELLE_INITIALE: float = 0.5
FACTEUR_ADAPTATION: float = 1.1
TAILLE_FENETRE: int = 100
ACCEPTATION_CIBLE: Tuple[float, float] = (0.2, 0.4)

LogPosterieur = Callable[[np.ndarray], float]


@dataclass(frozen=True)
class PriorSpec:
    """Loi a priori gaussienne à composantes indépendantes N(μ_j, σ_j²)."""

    mean: np.ndarray
    stddev: np.ndarray

    def __post_init__(self) -> None:
        mu = np.array(self.mean, dtype=np.float64, copy=True).reshape(-1)
        sd = np.array(self.stddev, dtype=np.float64, copy=True).reshape(-1)
        if mu.shape != sd.shape:
            raise DimensionError(f"moyenne {mu.shape} et écarts-types {sd.shape} de longueurs différentes")
        if not np.all(np.isfinite(mu)) or not np.all(np.isfinite(sd)) or np.any(sd <= 0.0):
            raise ValidationError("écarts-types a priori strictement positifs et finis requis")
        mu.setflags(write=False)
        sd.setflags(write=False)
        object.__setattr__(self, "mean", mu)
        object.__setattr__(self, "stddev", sd)

    @classmethod
    def standard_normal(cls, p: int) -> "PriorSpec":
        return cls(np.zeros(p), np.ones(p))

    def log_density(self, theta: np.ndarray) -> float:
        """Σ_j −(θ_j − μ_j)² / (2σ_j²), constantes omises."""
        z = (theta - self.mean) / self.stddev
        return float(-0.5 * (z @ z))


def log_posterior(
    spec: ModelSpec,
    prior: PriorSpec,
    data: Optional[LabeledDataset],
    theta: Union[ParameterVector, np.ndarray, Sequence[float]],
) -> float:
    """Log-postérieur non normalisé : Σ_i ln p̂_{Y_i}(X_i; θ) + log-densité a priori.

    `data=None` représente le jeu de données vide (postérieur = a priori).
    """
    modele = model_for(spec)
    t = modele.check_theta(theta if isinstance(theta, ParameterVector) else np.asarray(theta, dtype=np.float64))
    if prior.mean.shape[0] != t.shape[0]:
        raise DimensionError(f"a priori de dimension {prior.mean.shape[0]} pour {t.shape[0]} paramètres")
    valeur: float = prior.log_density(t)
    if data is not None:
        check_dataset(spec, data)
        valeur += float(np.sum(modele.log_likelihood_terms(t, data.features, data.labels)))
    return valeur


@dataclass(frozen=True)
class McmcChain:
    """Chaîne de Metropolis après rodage et amincissement.

    Attributs
    ---------
    samples : Tuple[ParameterVector, ...]
        Échantillons conservés, dans l'ordre de la chaîne.
    acceptance_rate : float
        accepted / proposed sur toute la chaîne.
    proposal_scale_final : float
        Échelle des propositions, figée à la fin du rodage.
    scale_trace : Tuple[float, ...]
        Échelle en vigueur à la fin de chaque fenêtre de 100 pas.
    """

    samples: Tuple[ParameterVector, ...]
    acceptance_rate: float
    proposal_scale_final: float
    burn_in: int
    thinning: int
    seed: RngStream
    accepted: int
    proposed: int
    scale_trace: Tuple[float, ...] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        if self.proposed < 1 or not 0 <= self.accepted <= self.proposed:
            raise ValidationError("décomptes d'acceptation incohérents")
        if abs(self.acceptance_rate - self.accepted / self.proposed) > 1e-12:
            raise ValidationError("taux d'acceptation incohérent avec les décomptes")

    def sample_matrix(self) -> np.ndarray:
        return np.vstack([s.theta for s in self.samples])


def metropolis_sample(
    log_post: LogPosterieur,
    init: Union[ParameterVector, np.ndarray, Sequence[float]],
    total_steps: int = PAS_TOTAL_DEFAUT,
    burn_in: int = RODAGE_DEFAUT,
    thinning: int = AMINCISSEMENT_DEFAUT,
    seed: RngStream = RngStream(0, 0),
    initial_scale: float = ECHELLE_INITIALE,
) -> McmcChain:
    """Metropolis à propositions gaussiennes isotropes.

    Pendant le rodage, l'échelle est ajustée toutes les 100 itérations : divisée
    par 1,1 si l'acceptation de la fenêtre est < 0,2, multipliée par 1,1 si elle
    est > 0,4. Elle est figée ensuite. Un pas tire toujours une proposition et
    un uniforme, de sorte que la chaîne ne dépend que de `seed`.
    """
    if total_steps <= burn_in or burn_in < 0:
        raise ValidationError("total_steps doit dépasser burn_in (>= 0)")
    if thinning < 1:
        raise ValidationError("thinning doit être >= 1")
    if initial_scale <= 0.0:
        raise ValidationError("l'échelle initiale doit être > 0")

    theta = np.array(getattr(init, "theta", init), dtype=np.float64).reshape(-1)
    p: int = theta.shape[0]
    lp: float = float(log_post(theta))
    if not np.isfinite(lp):
        raise NumericalError("log-postérieur non fini au point initial")

    gen = seed.generator()
    echelle: float = initial_scale
    acceptes: int = 0
    acceptes_fenetre: int = 0
    fenetres_vides: int = 0
    trace: list[float] = []
    echantillons: list[ParameterVector] = []

    for pas in range(total_steps):
        proposition = theta + echelle * gen.standard_normal(p)
        u: float = float(gen.random())
        lp_prop: float = float(log_post(proposition))
        if np.isfinite(lp_prop) and np.log(u) < lp_prop - lp:
            theta, lp = proposition, lp_prop
            acceptes += 1
            acceptes_fenetre += 1

        if (pas + 1) % TAILLE_FENETRE == 0:
            if acceptes_fenetre == 0:
                fenetres_vides += 1
                if fenetres_vides >= 10 * p:
                    raise PathologicalPosteriorError(
                        f"aucune proposition acceptée pendant {fenetres_vides} fenêtres consécutives"
                    )
            else:
                fenetres_vides = 0
            if pas + 1 <= burn_in:
                taux: float = acceptes_fenetre / TAILLE_FENETRE
                if taux < ACCEPTATION_CIBLE[0]:
                    echelle /= FACTEUR_ADAPTATION
                elif taux > ACCEPTATION_CIBLE[1]:
                    echelle *= FACTEUR_ADAPTATION
            trace.append(echelle)
            acceptes_fenetre = 0

        if pas >= burn_in and (pas - burn_in) % thinning == 0:
            echantillons.append(ParameterVector(theta))

    chaine = McmcChain(
        samples=tuple(echantillons),
        acceptance_rate=acceptes / total_steps,
        proposal_scale_final=echelle,
        burn_in=burn_in,
        thinning=thinning,
        seed=seed,
        accepted=acceptes,
        proposed=total_steps,
        scale_trace=tuple(trace),
    )
    logger.info(
        "chaîne MCMC : %d échantillons, acceptation %.3f, échelle finale %.4f",
        len(echantillons), chaine.acceptance_rate, echelle,
    )
    return chaine


def sample_posterior(
    spec: ModelSpec,
    data: Optional[LabeledDataset],
    seed: RngStream,
    total_steps: int = PAS_TOTAL_DEFAUT,
    burn_in: int = RODAGE_DEFAUT,
    thinning: int = AMINCISSEMENT_DEFAUT,
    prior: Optional[PriorSpec] = None,
    cfg: TrainingConfig = TrainingConfig(),
) -> McmcChain:
    """Chaîne sur p(θ | D_n) pour un GLM, a priori normal standard par défaut.

    Départ à l'estimateur du maximum de vraisemblance quand il existe, à 0 sinon.
    """
    if not spec.is_glm:
        raise ValidationError("l'oracle MCMC est réservé aux GLM")
    p: int = model_for(spec).parameter_count()
    prior = prior or PriorSpec.standard_normal(p)
    depart = np.zeros(p)
    if data is not None:
        try:
            depart = fit_full_data(spec, data, cfg).theta
        except NumericalError as exc:
            logger.warning("départ MCMC à 0 : ajustement complet en échec (%s)", exc)
    return metropolis_sample(
        lambda t: log_posterior(spec, prior, data, t),
        depart,
        total_steps,
        burn_in,
        thinning,
        seed,
    )


def bayesian_mi(chain: McmcChain, spec: ModelSpec, x_test: Union[np.ndarray, Sequence[float]]) -> MiEstimate:
    """Estimation Monte Carlo de I(Y_test; θ | X_test, D_n) sur les échantillons a posteriori."""
    if len(chain.samples) < 2:
        raise ValidationError("au moins deux échantillons a posteriori sont requis")
    return mutual_information(member_predictions(chain.samples, spec, np.asarray(x_test, dtype=np.float64)))
