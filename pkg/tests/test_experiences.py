from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from incertitude.actif.types import TypeScoreur
from incertitude.bootstrap.ensemble import build_bootstrap_ensemble, ensemble_predictions
from incertitude.bootstrap.poids import SchemaPoids
from incertitude.configuration import RunConfig
from incertitude.experiences import (
    active_arms,
    cmd_active,
    cmd_asymptotic,
    cmd_decompose,
    cmd_estimate,
    cmd_influence,
    cmd_redraws,
    cmd_teaser,
    model_spec,
    simulate_logistic,
    training_config,
)
from incertitude.information import mutual_information
from incertitude.lecture import parse_dataset_csv
from incertitude.noyau.alea import RngStream
from incertitude.noyau.erreurs import DimensionError, ValidationError

RAPIDE = dict(
    n=100, bootstrap=5, seeds=2, mcmc_steps=2000, burn_in=500, thinning=5,
    fisher_samples=2000, x_grid=(-1.0, 0.0, 1.0), epochs=30, redraws=4, test_points=6,
)


def _csv(tmp_path: Path, nom: str, X: np.ndarray, y=None) -> Path:
    table = pd.DataFrame(X, columns=[f"x{j}" for j in range(X.shape[1])])
    if y is not None:
        table["label"] = y
    chemin = tmp_path / nom
    table.to_csv(chemin, index=False)
    return chemin


@pytest.fixture
def fichiers(tmp_path: Path):
    donnees = simulate_logistic((0.5, 1.5, -1.0), 80, RngStream(3, 0))
    train = _csv(tmp_path, "train.csv", donnees.features, donnees.labels)
    test = _csv(tmp_path, "test.csv", np.array([[0.0, 0.0], [1.0, -1.0], [3.0, 2.0]]), [1, 0, 1])
    return train, test


def test_simulate_logistic_is_reproducible():
    a = simulate_logistic((0.5, 1.5), 50, RngStream(0, 1))
    b = simulate_logistic((0.5, 1.5), 50, RngStream(0, 1))
    assert np.array_equal(a.features, b.features) and np.array_equal(a.labels, b.labels)
    assert a.d == 1 and a.class_count == 2


def test_teaser_records_and_parameter_clouds():
    env = cmd_teaser(RunConfig(**RAPIDE))
    assert list(env.records.columns) == ["x_test", "mi_bootstrap", "mi_mcmc", "mi_first_order", "mi_variance_ratio"]
    assert env.records["x_test"].tolist() == [-1.0, 0.0, 1.0]
    assert (env.records.drop(columns="x_test") >= 0.0).all().all()
    nuages = env.tables["parametres"]
    assert set(nuages["source"]) == {"bootstrap", "mcmc"}
    assert (nuages["source"] == "bootstrap").sum() == 5
    assert env.meta["commande"] == "teaser" and env.meta["seed"] == 0
    # mêmes options, mêmes enregistrements
    assert env.records.equals(cmd_teaser(RunConfig(**RAPIDE)).records)


def test_synthetic_commands_require_the_logistic_model():
    with pytest.raises(ValidationError):
        cmd_teaser(RunConfig(model="softmax", **RAPIDE))


def test_estimate_matches_library_calls(fichiers):
    train, test = fichiers
    cfg = RunConfig(bootstrap=6, seed=2)
    env = cmd_estimate(cfg, train, test)
    assert list(env.records.columns) == ["point", "mi", "total_entropy", "mean_entropy", "true_class_spread", "mi_first_order"]

    donnees = parse_dataset_csv(train)
    spec = model_spec(cfg, 2, 2)
    ensemble = build_bootstrap_ensemble(spec, donnees, 6, SchemaPoids.DIRICHLET, training_config(cfg), 2)
    points = np.array([[0.0, 0.0], [1.0, -1.0], [3.0, 2.0]])
    for i, x in enumerate(points):
        direct = mutual_information(ensemble_predictions(ensemble, spec, x)).mi
        assert env.records["mi"].iloc[i] == pytest.approx(direct, abs=1e-12)
    assert env.meta["theta0_source"] == "plug-in MLE"


def test_estimate_rejects_mismatched_dimensions(tmp_path: Path, fichiers):
    train, _ = fichiers
    mauvais = _csv(tmp_path, "mauvais.csv", np.zeros((2, 3)))
    with pytest.raises(DimensionError):
        cmd_estimate(RunConfig(bootstrap=3), train, mauvais)


def test_decompose_identity_per_point(fichiers):
    train, test = fichiers
    env = cmd_decompose(RunConfig(model="mlp", hidden=(3,), bootstrap=3, seeds=2, epochs=30), train, test)
    r = env.records
    assert list(r.columns) == ["point", "total", "seeds", "resampling", "deep_ensemble_mi"]
    assert np.allclose(r["seeds"] + r["resampling"], r["total"], atol=1e-10)
    assert (r["seeds"] >= 0.0).all()


def test_decompose_glm_has_no_seed_component(fichiers):
    train, test = fichiers
    r = cmd_decompose(RunConfig(bootstrap=3, seeds=2), train, test).records
    assert np.allclose(r["seeds"], 0.0, atol=1e-12)
    assert np.allclose(r["deep_ensemble_mi"], 0.0, atol=1e-12)


def test_influence_pairs_with_exact_refits(fichiers):
    train, test = fichiers
    env = cmd_influence(RunConfig(bootstrap=8), train, test)
    r = env.records
    assert list(r.columns) == ["point", "mi_if", "mi_bootstrap"]
    assert env.meta["config"]["weights"] == "multinomial"
    assert ((r["mi_if"] - r["mi_bootstrap"]).abs() <= 0.5 * r["mi_bootstrap"] + 1e-3).all()


def test_asymptotic_small_grid():
    env = cmd_asymptotic(RunConfig(n_grid=(100, 200), **{k: v for k, v in RAPIDE.items() if k != "n"}))
    r = env.records
    assert r["n"].tolist() == [100] * 3 + [200] * 3
    assert np.allclose(r["n_mi_mcmc"], r["n"] * r["mi_mcmc"])
    assert set(env.meta["par_n"]) == {"100", "200"}


def test_active_arms_and_records():
    assert active_arms(RunConfig()) == [TypeScoreur.BOOTSTRAP_MI, TypeScoreur.ALEATOIRE]
    assert TypeScoreur.ENSEMBLE_MI in active_arms(RunConfig(model="mlp"))
    env = cmd_active(RunConfig(budget=2, repetitions=1, pool_size=20, seeds=3))
    r = env.records
    assert list(r.columns) == ["step", "n_labeled", "accuracy", "scorer", "seed", "repetition"]
    assert set(r["scorer"]) == {"bootstrap-mi", "random"}
    assert r.groupby("scorer")["step"].apply(list).tolist() == [[0, 1, 2], [0, 1, 2]]
    assert env.meta["modele"] == "softmax"


def test_redraws_spreads():
    env = cmd_redraws(RunConfig(**RAPIDE))
    r = env.records
    assert list(r.columns) == ["point", "label", "spread_redraws", "spread_bootstrap"]
    assert len(r) == 6
    assert (r[["spread_redraws", "spread_bootstrap"]] >= 0.0).all().all()


@pytest.mark.lent
def test_asymptotic_agreement_at_desk_scale():
    cfg = RunConfig(n_grid=(1600,), bootstrap=100, mcmc_steps=30000, burn_in=5000, thinning=10)
    meta = cmd_asymptotic(cfg).meta["par_n"]["1600"]
    assert meta["mediane_bootstrap_mcmc"] <= 0.2
    assert meta["ecart_covariance_relatif"] <= 0.25
