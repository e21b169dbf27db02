"""Pilotes des commandes : chaque fonction `cmd_*` retourne une `ResultEnvelope`."""
from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np
from scipy import stats

from . import __version__
from .actif.boucle import AccuracyRow, run_active_learning
from .actif.taches import gaussian_mixture_task
from .actif.types import AcquisitionConfig, TypeScoreur
from .asymptotique import (
    FisherInformation,
    ModeFisher,
    delta_variances,
    first_order_mi,
    fisher_information,
    plug_in_context,
    plug_in_first_order_mi,
    prediction_gradient,
)
from .attribution import build_influence_cache, if_bootstrap_ensemble
from .bootstrap.ajustement import fit_full_data, fit_weighted_mle
from .bootstrap.ensemble import (
    BootstrapEnsemble,
    build_bootstrap_ensemble,
    ensemble_predictions,
    member_predictions,
    member_predictions_batch,
    parameter_covariance,
)
from .bootstrap.poids import SchemaPoids, sample_weights
from .configuration import RunConfig
from .information import (
    PredictionGrid,
    decompose_mi,
    deep_ensemble_mi,
    mutual_information,
    mutual_information_batch,
    true_class_spread,
    variance_ratio_mi,
)
from .lecture import EvaluationPoints, parse_dataset_csv, read_test_points
from .modeles.base import sigmoid
from .modeles.operations import predict_proba, predict_rows
from .modeles.types import ModelSpec, ParameterVector, TrainingConfig, TypeModele
from .noyau.alea import (
    DECALAGE_MCMC,
    DECALAGE_SCORES,
    DECALAGE_SIMULATION,
    RngStream,
    derive_seed,
    replicate_stream,
    training_stream,
)
from .noyau.donnees import LabeledDataset
from .noyau.erreurs import ActiveLearningAborted, DimensionError, ValidationError
from .noyau.probabilite import PredictionMatrix
from .posterieur import ECHELLE_INITIALE, FACTEUR_ADAPTATION, bayesian_mi, sample_posterior
from .sortie import ResultEnvelope, records_frame

logger = logging.getLogger(__name__)

Chemin = Union[str, Path]
T = TypeVar("T")

COLONNES_ACTIF: List[str] = ["step", "n_labeled", "accuracy", "scorer", "seed", "repetition"]


# ---------------------------------------------------------------------------
# Outils communs
# ---------------------------------------------------------------------------

def _meta(cfg: RunConfig, commande: str, debut: float, **extra: Any) -> Dict[str, Any]:
    meta: Dict[str, Any] = {
        "outil": "incertitude",
        "version": __version__,
        "commande": commande,
        "seed": cfg.seed,
        "config": cfg.as_dict(),
        "duree_s": round(time.perf_counter() - debut, 3),
    }
    meta.update(extra)
    return meta


def _ordonne(fonction: Callable[[int], T], total: int, workers: int) -> List[T]:
    """Applique `fonction` à 0…total−1 ; résultats dans l'ordre des indices quel que soit `workers`."""
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fonction, range(total)))
    return [fonction(i) for i in range(total)]


def _ratio(a: float, b: float) -> float:
    return a / b if b != 0.0 else float("nan")


def _correlations(a: Sequence[float], b: Sequence[float]) -> Dict[str, float]:
    x, y = np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)
    if x.shape[0] < 3 or np.ptp(x) == 0.0 or np.ptp(y) == 0.0:
        return {"pearson": float("nan"), "spearman": float("nan")}
    return {"pearson": float(stats.pearsonr(x, y)[0]), "spearman": float(stats.spearmanr(x, y)[0])}


def model_spec(cfg: RunConfig, d: int, k: int, kind: Optional[TypeModele] = None) -> ModelSpec:
    type_m = kind or TypeModele.depuis_option(cfg.model)
    hidden = cfg.hidden if type_m is TypeModele.MLP else ()
    return ModelSpec(type_m, d, k, hidden_layers=hidden, includes_intercept=cfg.intercept)


def training_config(cfg: RunConfig, l2: Optional[float] = None) -> TrainingConfig:
    return TrainingConfig(
        epochs=cfg.epochs,
        step_size=cfg.step_size,
        optimizer=cfg.optimizer or None,
        l2_penalty=cfg.l2 if l2 is None else l2,
    )


def simulate_logistic(theta0: Sequence[float], n: int, stream: RngStream) -> LabeledDataset:
    """x ~ N(0, I_d), y ~ Bernoulli(σ(θ0₀ + θ0₁ᵀx)) avec d = len(theta0) − 1."""
    theta = np.asarray(theta0, dtype=np.float64)
    gen = stream.generator()
    X = gen.standard_normal((n, theta.shape[0] - 1))
    p1 = sigmoid(theta[0] + X @ theta[1:])
    y = (gen.random(n) < p1).astype(np.int64)
    return LabeledDataset(X, y, 2)


def _point(x: float, d: int) -> np.ndarray:
    """Point de test (x, 0, …, 0) de dimension d."""
    out = np.zeros(d)
    out[0] = x
    return out


def _fisher_synthetique(spec: ModelSpec, theta0: Sequence[float], cfg: RunConfig) -> FisherInformation:
    """I(θ0) analytique moyennée sur des caractéristiques N(0, I_d) simulées."""
    d: int = spec.input_dim
    return fisher_information(
        spec,
        np.asarray(theta0, dtype=np.float64),
        lambda gen, taille: gen.standard_normal((taille, d)),
        ModeFisher.ANALYTIQUE,
        seed=RngStream(cfg.seed, DECALAGE_SCORES),
        sample_size=cfg.fisher_samples,
    )


def _premier_ordre(spec: ModelSpec, theta0: ParameterVector, fisher: FisherInformation, x: np.ndarray, n: int) -> float:
    dv = delta_variances(prediction_gradient(spec, theta0, x), fisher)
    return first_order_mi(dv, predict_proba(spec, theta0, x), n)


def _logistique_synthetique(cfg: RunConfig) -> ModelSpec:
    if TypeModele.depuis_option(cfg.model) is not TypeModele.LOGISTIQUE:
        raise ValidationError("cette commande simule le modèle logistique binaire : --model logistic requis")
    return ModelSpec(TypeModele.LOGISTIQUE, len(cfg.theta0) - 1, 2, includes_intercept=True)


def _charger(train_csv: Chemin, test_csv: Chemin) -> Tuple[LabeledDataset, EvaluationPoints]:
    data = parse_dataset_csv(train_csv)
    test = read_test_points(test_csv)
    if test.features.shape[1] != data.d:
        raise DimensionError(f"points de test de dimension {test.features.shape[1]} pour d = {data.d}")
    if test.labels is not None and np.any(test.labels >= data.class_count):
        raise ValidationError(f"étiquette de test hors de {{0, …, {data.class_count - 1}}}")
    return data, test


# ---------------------------------------------------------------------------
# Commandes
# ---------------------------------------------------------------------------

def cmd_teaser(cfg: RunConfig) -> ResultEnvelope:
    """Régression logistique simulée : information mutuelle bootstrap, MCMC et au premier ordre sur une grille de x."""
    debut = time.perf_counter()
    cfg = cfg.effective_for("teaser")
    spec = _logistique_synthetique(cfg)
    theta0 = ParameterVector(np.asarray(cfg.theta0))
    logger.info("teaser : n = %d, B = %d, graine %d", cfg.n, cfg.bootstrap, cfg.seed)

    data = simulate_logistic(cfg.theta0, cfg.n, RngStream(cfg.seed, DECALAGE_SIMULATION))
    ensemble = build_bootstrap_ensemble(
        spec, data, cfg.bootstrap, SchemaPoids.depuis_option(cfg.weights), training_config(cfg), cfg.seed, cfg.workers
    )
    chaine = sample_posterior(spec, data, RngStream(cfg.seed, DECALAGE_MCMC), cfg.mcmc_steps, cfg.burn_in, cfg.thinning)
    fisher = _fisher_synthetique(spec, cfg.theta0, cfg)

    lignes: List[Dict[str, Any]] = []
    for x in cfg.x_grid:
        point = _point(x, spec.input_dim)
        predictions = ensemble_predictions(ensemble, spec, point)
        lignes.append({
            "x_test": x,
            "mi_bootstrap": mutual_information(predictions).mi,
            "mi_mcmc": bayesian_mi(chaine, spec, point).mi,
            "mi_first_order": _premier_ordre(spec, theta0, fisher, point, cfg.n),
            "mi_variance_ratio": variance_ratio_mi(predictions),
        })

    noms = [f"theta{j}" for j in range(len(theta0))]
    parametres: List[Dict[str, Any]] = []
    for source, echantillons in (("bootstrap", ensemble.members), ("mcmc", chaine.samples)):
        for theta in echantillons:
            parametres.append({"source": source, **dict(zip(noms, theta.theta.tolist()))})

    records = records_frame(lignes, ["x_test", "mi_bootstrap", "mi_mcmc", "mi_first_order", "mi_variance_ratio"])
    meta = _meta(
        cfg, "teaser", debut,
        theta0=list(cfg.theta0),
        replicats_en_echec=list(ensemble.failed),
        mcmc={
            "acceptation": chaine.acceptance_rate,
            "echelle_finale": chaine.proposal_scale_final,
            "echantillons": len(chaine.samples),
            "echelle_initiale": ECHELLE_INITIALE,
            "facteur_adaptation": FACTEUR_ADAPTATION,
        },
        correlation_bootstrap_mcmc=_correlations(records["mi_bootstrap"], records["mi_mcmc"]),
    )
    return ResultEnvelope(meta, records, {"parametres": records_frame(parametres, ["source", *noms])})


def cmd_estimate(cfg: RunConfig, train_csv: Chemin, test_csv: Chemin) -> ResultEnvelope:
    """Information mutuelle bootstrap pour chaque point du fichier de test."""
    debut = time.perf_counter()
    cfg = cfg.effective_for("estimate")
    data, test = _charger(train_csv, test_csv)
    spec = model_spec(cfg, data.d, data.class_count)
    entrainement = training_config(cfg)
    ensemble = build_bootstrap_ensemble(
        spec, data, cfg.bootstrap, SchemaPoids.depuis_option(cfg.weights), entrainement, cfg.seed, cfg.workers
    )
    contexte = plug_in_context(spec, data, entrainement) if spec.is_glm else None

    colonnes = ["point", "mi", "total_entropy", "mean_entropy"]
    if test.labels is not None:
        colonnes.append("true_class_spread")
    if contexte is not None:
        colonnes.append("mi_first_order")

    probs = member_predictions_batch(ensemble.members, spec, test.features)
    lot = mutual_information_batch(probs)
    lignes: List[Dict[str, Any]] = []
    for i in range(test.n):
        estimation = lot.estimate(i)
        ligne: Dict[str, Any] = {
            "point": i,
            "mi": estimation.mi,
            "total_entropy": estimation.total_entropy,
            "mean_entropy": estimation.mean_entropy,
        }
        if test.labels is not None:
            ligne["true_class_spread"] = true_class_spread(PredictionMatrix(probs[:, i, :]), int(test.labels[i]))
        if contexte is not None:
            ligne["mi_first_order"] = plug_in_first_order_mi(spec, data, test.features[i], entrainement, contexte)
        lignes.append(ligne)

    extra: Dict[str, Any] = {"replicats_en_echec": list(ensemble.failed), "modele": spec.kind.value}
    if contexte is not None:
        extra["theta0_source"] = "plug-in MLE"
        extra["theta_hat"] = contexte.theta_hat.theta.tolist()
    return ResultEnvelope(_meta(cfg, "estimate", debut, **extra), records_frame(lignes, colonnes))


def prediction_grid_members(
    spec: ModelSpec,
    data: LabeledDataset,
    B: int,
    S: int,
    scheme: SchemaPoids,
    cfg: TrainingConfig,
    master_seed: int,
    workers: int = 1,
) -> List[List[ParameterVector]]:
    """Modèles θ(b, s) : jeu bootstrap b (poids du sous-flux b), graine d'entraînement s."""

    def ligne(b: int) -> List[ParameterVector]:
        xi = sample_weights(data.n, replicate_stream(master_seed, b), scheme)
        return [fit_weighted_mle(spec, data, xi, cfg, seed=training_stream(master_seed, s)) for s in range(S)]

    return _ordonne(ligne, B, workers)


def cmd_decompose(cfg: RunConfig, train_csv: Chemin, test_csv: Chemin) -> ResultEnvelope:
    """Grille B×S : parts rééchantillonnage et graines, et information de l'ensemble profond."""
    debut = time.perf_counter()
    cfg = cfg.effective_for("decompose")
    data, test = _charger(train_csv, test_csv)
    spec = model_spec(cfg, data.d, data.class_count)
    if spec.is_glm:
        logger.warning("modèle %s déterministe : la part « graines » sera nulle", spec.kind.value)
    entrainement = training_config(cfg)
    scheme = SchemaPoids.depuis_option(cfg.weights)

    grille = prediction_grid_members(spec, data, cfg.bootstrap, cfg.seeds, scheme, entrainement, cfg.seed, cfg.workers)
    uniformes = np.full(data.n, 1.0 / data.n)
    profonds = tuple(
        fit_weighted_mle(spec, data, uniformes, entrainement, seed=training_stream(cfg.seed, s)) for s in range(cfg.seeds)
    )

    lignes: List[Dict[str, Any]] = []
    for i in range(test.n):
        x = test.features[i : i + 1]
        cellules = np.stack([np.vstack([predict_rows(spec, theta, x) for theta in rang]) for rang in grille])
        decomposition = decompose_mi(PredictionGrid(cellules))
        lignes.append({
            "point": i,
            "total": decomposition.total.mi,
            "seeds": decomposition.seeds,
            "resampling": decomposition.resampling,
            "deep_ensemble_mi": deep_ensemble_mi(member_predictions(profonds, spec, test.features[i])).mi,
        })

    records = records_frame(lignes, ["point", "total", "seeds", "resampling", "deep_ensemble_mi"])
    graines = records["seeds"].to_numpy(dtype=np.float64)
    reech = records["resampling"].to_numpy(dtype=np.float64)
    meta = _meta(
        cfg, "decompose", debut,
        modele=spec.kind.value,
        correlation_graines_ensemble=_correlations(graines, records["deep_ensemble_mi"]),
        rapport_moyen_graines_reechantillonnage=_ratio(float(graines.mean()), float(reech.mean())) if len(records) else None,
    )
    return ResultEnvelope(meta, records)


def cmd_asymptotic(cfg: RunConfig) -> ResultEnvelope:
    """Convergence sur une grille de n : n·I bootstrap, n·I MCMC et n·I au premier ordre."""
    debut = time.perf_counter()
    cfg = cfg.effective_for("asymptotic")
    spec = _logistique_synthetique(cfg)
    theta0 = ParameterVector(np.asarray(cfg.theta0))
    fisher = _fisher_synthetique(spec, cfg.theta0, cfg)
    inverse = fisher.inverse()
    scheme = SchemaPoids.depuis_option(cfg.weights)

    lignes: List[Dict[str, Any]] = []
    synthese: Dict[str, Dict[str, float]] = {}
    for n in cfg.n_grid:
        graine_n: int = derive_seed(cfg.seed, n)
        logger.info("asymptotique : n = %d (graine dérivée %d)", n, graine_n)
        data = simulate_logistic(cfg.theta0, n, RngStream(graine_n, DECALAGE_SIMULATION))
        ensemble = build_bootstrap_ensemble(spec, data, cfg.bootstrap, scheme, training_config(cfg), graine_n, cfg.workers)
        chaine = sample_posterior(spec, data, RngStream(graine_n, DECALAGE_MCMC), cfg.mcmc_steps, cfg.burn_in, cfg.thinning)
        replique = sample_posterior(spec, data, RngStream(graine_n, DECALAGE_MCMC + 1), cfg.mcmc_steps, cfg.burn_in, cfg.thinning)

        erreurs: Dict[str, List[float]] = {"bootstrap_mcmc": [], "mcmc_premier_ordre": [], "mcmc_replique": []}
        for x in cfg.x_grid:
            point = _point(x, spec.input_dim)
            mi_b = mutual_information(ensemble_predictions(ensemble, spec, point)).mi
            mi_m = bayesian_mi(chaine, spec, point).mi
            mi_r = bayesian_mi(replique, spec, point).mi
            mi_f = _premier_ordre(spec, theta0, fisher, point, n)
            ligne = {
                "n": n,
                "x_test": x,
                "mi_bootstrap": mi_b,
                "mi_mcmc": mi_m,
                "mi_mcmc_replicate": mi_r,
                "mi_first_order": mi_f,
                "n_mi_bootstrap": n * mi_b,
                "n_mi_mcmc": n * mi_m,
                "n_mi_first_order": n * mi_f,
                "ratio_bootstrap_mcmc": _ratio(mi_b, mi_m),
                "ratio_mcmc_first_order": _ratio(mi_m, mi_f),
                "ratio_mcmc_replicate": _ratio(mi_r, mi_m),
            }
            lignes.append(ligne)
            erreurs["bootstrap_mcmc"].append(abs(ligne["ratio_bootstrap_mcmc"] - 1.0))
            erreurs["mcmc_premier_ordre"].append(abs(ligne["ratio_mcmc_first_order"] - 1.0))
            erreurs["mcmc_replique"].append(abs(ligne["ratio_mcmc_replicate"] - 1.0))

        covariance = n * parameter_covariance(ensemble)
        synthese[str(n)] = {
            **{f"mediane_{cle}": float(np.median(v)) for cle, v in erreurs.items()},
            "ecart_covariance_relatif": float(np.linalg.norm(covariance - inverse) / np.linalg.norm(inverse)),
            "acceptation_mcmc": chaine.acceptance_rate,
            "replicats_en_echec": float(len(ensemble.failed)),
        }

    colonnes = [
        "n", "x_test", "mi_bootstrap", "mi_mcmc", "mi_mcmc_replicate", "mi_first_order",
        "n_mi_bootstrap", "n_mi_mcmc", "n_mi_first_order",
        "ratio_bootstrap_mcmc", "ratio_mcmc_first_order", "ratio_mcmc_replicate",
    ]
    meta = _meta(
        cfg, "asymptotic", debut,
        theta0=list(cfg.theta0),
        fisher=fisher.matrix.tolist(),
        conditionnement_fisher=fisher.condition_number,
        par_n=synthese,
    )
    return ResultEnvelope(meta, records_frame(lignes, colonnes))


def _lignes_courbe(courbe: Sequence[AccuracyRow], scoreur: TypeScoreur, graine: int, repetition: int) -> List[Dict[str, Any]]:
    return [
        {"step": r.acquisitions, "n_labeled": r.n_labeled, "accuracy": r.accuracy,
         "scorer": scoreur.value, "seed": graine, "repetition": repetition}
        for r in courbe
    ]


def active_arms(cfg: RunConfig) -> List[TypeScoreur]:
    """Bras comparés : bootstrap-mi et aléatoire toujours, ensemble-mi pour un MLP."""
    bras = [TypeScoreur.BOOTSTRAP_MI, TypeScoreur.ALEATOIRE]
    if TypeModele.depuis_option(cfg.model) is TypeModele.MLP:
        bras.insert(1, TypeScoreur.ENSEMBLE_MI)
    return bras


def cmd_active(cfg: RunConfig) -> ResultEnvelope:
    """Apprentissage actif sur un mélange gaussien 2D à 4 classes, bras aléatoire inclus."""
    debut = time.perf_counter()
    cfg = cfg.effective_for("active")
    kind = TypeModele.MLP if TypeModele.depuis_option(cfg.model) is TypeModele.MLP else TypeModele.SOFTMAX
    spec = model_spec(cfg, 2, 4, kind)
    entrainement = training_config(cfg, l2=cfg.active_l2)
    scheme = SchemaPoids.depuis_option(cfg.weights)

    lignes: List[Dict[str, Any]] = []
    finales: Dict[str, List[float]] = {}
    for repetition in range(cfg.repetitions):
        graine: int = derive_seed(cfg.seed, repetition)
        etat = gaussian_mixture_task(graine, pool_size=cfg.pool_size)
        for scoreur in active_arms(cfg):
            acq = AcquisitionConfig(scoreur, cfg.budget, spec, entrainement, graine, cfg.seeds, scheme, cfg.workers)
            try:
                courbe = run_active_learning(etat, acq)
            except ActiveLearningAborted as exc:
                partielles = lignes + _lignes_courbe(exc.courbe, scoreur, graine, repetition)
                raise ActiveLearningAborted(str(exc), partielles) from exc
            lignes.extend(_lignes_courbe(courbe, scoreur, graine, repetition))
            finales.setdefault(scoreur.value, []).append(courbe[-1].accuracy)

    bootstrap = np.asarray(finales[TypeScoreur.BOOTSTRAP_MI.value])
    aleatoire = np.asarray(finales[TypeScoreur.ALEATOIRE.value])
    meta = _meta(
        cfg, "active", debut,
        modele=spec.kind.value,
        exactitude_finale_moyenne={cle: float(np.mean(v)) for cle, v in finales.items()},
        victoires_bootstrap_contre_aleatoire=int(np.sum(bootstrap >= aleatoire)),
    )
    return ResultEnvelope(meta, records_frame(lignes, COLONNES_ACTIF))


def cmd_influence(cfg: RunConfig, train_csv: Chemin, test_csv: Chemin) -> ResultEnvelope:
    """Information mutuelle par fonctions d'influence face aux réajustements exacts, mêmes poids."""
    debut = time.perf_counter()
    cfg = cfg.effective_for("influence")
    data, test = _charger(train_csv, test_csv)
    spec = model_spec(cfg, data.d, data.class_count)
    entrainement = training_config(cfg)
    scheme = SchemaPoids.depuis_option(cfg.weights)

    cache = build_influence_cache(spec, data, entrainement, cfg.damping, seed=training_stream(cfg.seed, 0))
    approches = if_bootstrap_ensemble(cache, cfg.bootstrap, scheme, cfg.seed)
    exact: BootstrapEnsemble = build_bootstrap_ensemble(spec, data, cfg.bootstrap, scheme, entrainement, cfg.seed, cfg.workers)

    lignes: List[Dict[str, Any]] = []
    for i in range(test.n):
        x = test.features[i]
        lignes.append({
            "point": i,
            "mi_if": mutual_information(member_predictions(approches, spec, x)).mi,
            "mi_bootstrap": mutual_information(ensemble_predictions(exact, spec, x)).mi,
        })
    records = records_frame(lignes, ["point", "mi_if", "mi_bootstrap"])
    meta = _meta(
        cfg, "influence", debut,
        modele=spec.kind.value,
        bloc_parametres=int(cache.parameter_indices.shape[0]),
        replicats_en_echec=list(exact.failed),
        correlation_if_bootstrap=_correlations(records["mi_if"], records["mi_bootstrap"]),
        rapport_moyen_if_bootstrap=_ratio(float(records["mi_if"].mean()), float(records["mi_bootstrap"].mean())) if len(records) else None,
    )
    return ResultEnvelope(meta, records)


def cmd_redraws(cfg: RunConfig) -> ResultEnvelope:
    """Dispersion de la probabilité de la vraie classe : nouveaux tirages de données contre bootstrap."""
    debut = time.perf_counter()
    cfg = cfg.effective_for("redraws")
    spec = model_spec(cfg, len(cfg.theta0) - 1, 2)
    entrainement = training_config(cfg)

    data = simulate_logistic(cfg.theta0, cfg.n, RngStream(cfg.seed, DECALAGE_SIMULATION))
    tests = simulate_logistic(cfg.theta0, cfg.test_points, RngStream(cfg.seed, DECALAGE_SIMULATION + 1))

    def nouveau_tirage(r: int) -> ParameterVector:
        graine = derive_seed(cfg.seed, r + 1)
        frais = simulate_logistic(cfg.theta0, cfg.n, RngStream(graine, DECALAGE_SIMULATION))
        return fit_full_data(spec, frais, entrainement, seed=training_stream(graine, 0))

    tirages = tuple(_ordonne(nouveau_tirage, cfg.redraws, cfg.workers))
    ensemble = build_bootstrap_ensemble(
        spec, data, cfg.bootstrap, SchemaPoids.depuis_option(cfg.weights), entrainement, cfg.seed, cfg.workers
    )
    graines: Optional[Tuple[ParameterVector, ...]] = None
    if spec.kind is TypeModele.MLP:
        uniformes = np.full(data.n, 1.0 / data.n)
        graines = tuple(
            fit_weighted_mle(spec, data, uniformes, entrainement, seed=training_stream(cfg.seed, s)) for s in range(cfg.seeds)
        )

    colonnes = ["point", "label", "spread_redraws", "spread_bootstrap"] + (["spread_ensemble"] if graines else [])
    lignes: List[Dict[str, Any]] = []
    for i in range(tests.n):
        x, y = tests.features[i], int(tests.labels[i])
        ligne: Dict[str, Any] = {
            "point": i,
            "label": y,
            "spread_redraws": true_class_spread(member_predictions(tirages, spec, x), y),
            "spread_bootstrap": true_class_spread(ensemble_predictions(ensemble, spec, x), y),
        }
        if graines:
            ligne["spread_ensemble"] = true_class_spread(member_predictions(graines, spec, x), y)
        lignes.append(ligne)

    records = records_frame(lignes, colonnes)
    extra: Dict[str, Any] = {
        "theta0": list(cfg.theta0),
        "correlation_bootstrap_tirages": _correlations(records["spread_bootstrap"], records["spread_redraws"]),
    }
    if graines:
        extra["correlation_ensemble_tirages"] = _correlations(records["spread_ensemble"], records["spread_redraws"])
    return ResultEnvelope(_meta(cfg, "redraws", debut, **extra), records)


COMMANDES_SYNTHETIQUES: Dict[str, Callable[[RunConfig], ResultEnvelope]] = {
    "teaser": cmd_teaser,
    "asymptotic": cmd_asymptotic,
    "active": cmd_active,
    "redraws": cmd_redraws,
}

COMMANDES_DONNEES: Dict[str, Callable[[RunConfig, Chemin, Chemin], ResultEnvelope]] = {
    "estimate": cmd_estimate,
    "decompose": cmd_decompose,
    "influence": cmd_influence,
}
