from __future__ import annotations

import numpy as np
import pytest

from incertitude.bootstrap.ajustement import fit_full_data, fit_weighted_mle
from incertitude.bootstrap.ensemble import (
    BootstrapEnsemble,
    build_bootstrap_ensemble,
    ensemble_predictions,
    member_predictions_batch,
    parameter_covariance,
)
from incertitude.bootstrap.poids import (
    SchemaPoids,
    WeightVector,
    sample_dirichlet_weights,
    sample_multinomial_weights,
    sample_weights,
)
from incertitude.modeles.operations import model_for, predict_proba
from incertitude.modeles.types import ModelSpec, TrainingConfig, TypeModele
from incertitude.noyau.alea import RngStream
from incertitude.noyau.donnees import LabeledDataset
from incertitude.noyau.erreurs import BootstrapFailureError, ValidationError


def test_dirichlet_weights():
    assert np.array_equal(sample_dirichlet_weights(1, RngStream(0, 0)).weights, [1.0])
    w = sample_dirichlet_weights(500, RngStream(0, 1))
    assert w.scheme is SchemaPoids.DIRICHLET
    assert abs(w.weights.sum() - 1.0) <= 1e-12
    assert w.weights.min() > 0.0
    assert np.array_equal(w.weights, sample_dirichlet_weights(500, RngStream(0, 1)).weights)


def test_dirichlet_mean_is_uniform():
    n = 10000
    somme = np.zeros(n)
    for b in range(1000):
        somme += sample_dirichlet_weights(n, RngStream(1, b)).weights
    moyennes = somme / 1000
    # écart-type de la moyenne : sqrt((n−1)/(n²(n+1)) / 1000)
    erreur_type = np.sqrt((n - 1) / (n * n * (n + 1)) / 1000)
    assert np.all(np.abs(moyennes - 1.0 / n) < 6 * erreur_type)


def test_multinomial_weights():
    assert np.array_equal(sample_multinomial_weights(1, RngStream(0, 0)).weights, [1.0])
    w = sample_multinomial_weights(1000, RngStream(2, 0))
    comptes = w.weights * 1000
    assert np.allclose(comptes, np.round(comptes))
    assert abs(w.weights.sum() - 1.0) <= 1e-12


def test_multinomial_zero_fraction():
    n = 1000
    zeros = [np.mean(sample_multinomial_weights(n, RngStream(3, b)).weights == 0.0) for b in range(200)]
    assert np.mean(zeros) == pytest.approx((1 - 1 / n) ** n, abs=0.01)


def test_weight_vector_validation():
    with pytest.raises(ValidationError):
        WeightVector(np.array([0.5, 0.6]), SchemaPoids.DIRICHLET)
    with pytest.raises(ValidationError):
        WeightVector(np.array([1.0, 0.0]), SchemaPoids.DIRICHLET)
    with pytest.raises(ValidationError):
        WeightVector(np.array([0.3, 0.7]), SchemaPoids.MULTINOMIAL)
    assert len(WeightVector(np.array([0.5, 0.5, 0.0, 0.0]), SchemaPoids.MULTINOMIAL)) == 4
    with pytest.raises(ValidationError):
        SchemaPoids.depuis_option("poisson")


def _constante(positifs: int, n: int) -> LabeledDataset:
    # caractéristique nulle : seule l'ordonnée est identifiable
    y = np.array([1] * positifs + [0] * (n - positifs))
    return LabeledDataset(np.zeros((n, 1)), y, 2)


def test_intercept_only_mle(logistique):
    assert fit_full_data(logistique, _constante(5, 10)).theta[0] == pytest.approx(0.0, abs=1e-8)
    assert fit_full_data(logistique, _constante(3, 10)).theta[0] == pytest.approx(np.log(0.3 / 0.7), abs=1e-6)


def test_weighted_mle_is_stationary_and_scale_invariant(logistique, donnees_logistiques):
    xi = sample_dirichlet_weights(donnees_logistiques.n, RngStream(0, 4)).weights
    theta = fit_weighted_mle(logistique, donnees_logistiques, xi)
    modele = model_for(logistique)
    gradient = modele.weighted_gradient(theta.theta, donnees_logistiques.features, donnees_logistiques.labels, xi)
    assert np.max(np.abs(gradient)) <= 1e-8
    triple = fit_weighted_mle(logistique, donnees_logistiques, 3 * xi)
    assert np.allclose(theta.theta, triple.theta, atol=1e-8)


def test_softmax_mle_with_ridge_is_stationary(donnees_logistiques):
    spec = ModelSpec(TypeModele.SOFTMAX, 1, 2)
    cfg = TrainingConfig(l2_penalty=0.1)
    theta = fit_full_data(spec, donnees_logistiques, cfg).theta
    modele = model_for(spec)
    w = np.full(donnees_logistiques.n, 1 / donnees_logistiques.n)
    gradient = modele.weighted_gradient(theta, donnees_logistiques.features, donnees_logistiques.labels, w)
    gradient -= 0.1 * modele.penalty_mask() * theta
    assert np.max(np.abs(gradient)) <= 1e-8


def test_mlp_fit_requires_training_stream(petit_mlp):
    data = LabeledDataset(np.zeros((3, 2)), np.array([0, 1, 2]), 3)
    with pytest.raises(ValidationError):
        fit_weighted_mle(petit_mlp, data, np.full(3, 1 / 3))


def test_gradient_descent_reaches_the_newton_mle(logistique, donnees_logistiques):
    newton = fit_full_data(logistique, donnees_logistiques)
    cfg = TrainingConfig(optimizer="gradient-descent", step_size=1.0, epochs=5000)
    descente = fit_full_data(logistique, donnees_logistiques, cfg)
    assert np.allclose(descente.theta, newton.theta, atol=1e-4)


def test_optimizer_choice_is_checked(petit_mlp):
    data = LabeledDataset(np.zeros((3, 2)), np.array([0, 1, 2]), 3)
    with pytest.raises(ValidationError, match="Newton"):
        fit_weighted_mle(petit_mlp, data, np.full(3, 1 / 3), TrainingConfig(optimizer="newton"), seed=RngStream(0, 0))
    with pytest.raises(ValidationError):
        TrainingConfig(optimizer="lbfgs")
    assert TrainingConfig().optimiseur_pour(petit_mlp).value == "gradient-descent"


def test_ensemble_is_deterministic(logistique, donnees_logistiques):
    a = build_bootstrap_ensemble(logistique, donnees_logistiques, 4, master_seed=3)
    b = build_bootstrap_ensemble(logistique, donnees_logistiques, 4, master_seed=3)
    assert a.members == b.members
    assert a.size == 4 and a.failed == ()
    # le réplicat b tire ses poids du sous-flux (graine, b)
    attendu = sample_weights(donnees_logistiques.n, RngStream(3, 2), SchemaPoids.DIRICHLET)
    assert np.array_equal(a.weight_draws[2].weights, attendu.weights)


def test_ensemble_is_independent_of_workers(petit_mlp):
    gen = np.random.default_rng(0)
    data = LabeledDataset(gen.standard_normal((20, 2)), np.arange(20) % 3, 3)
    cfg = TrainingConfig(epochs=20)
    sequentiel = build_bootstrap_ensemble(petit_mlp, data, 4, cfg=cfg, master_seed=1, workers=1)
    parallele = build_bootstrap_ensemble(petit_mlp, data, 4, cfg=cfg, master_seed=1, workers=3)
    assert sequentiel.members == parallele.members


def test_ensemble_predictions_match_members(logistique, donnees_logistiques):
    ensemble = build_bootstrap_ensemble(logistique, donnees_logistiques, 5, master_seed=0)
    m = ensemble_predictions(ensemble, logistique, np.array([0.0]))
    for b, theta in enumerate(ensemble.members):
        assert np.array_equal(m.rows[b], predict_proba(logistique, theta, [0.0]).probs)
    lot = member_predictions_batch(ensemble.members, logistique, np.array([[0.0], [1.0]]))
    assert lot.shape == (5, 2, 2)
    assert np.allclose(lot[:, 0, :], m.rows)


def test_ensemble_validation(logistique, donnees_logistiques):
    with pytest.raises(ValidationError):
        build_bootstrap_ensemble(logistique, donnees_logistiques, 1)
    ensemble = build_bootstrap_ensemble(logistique, donnees_logistiques, 3)
    with pytest.raises(ValidationError):
        BootstrapEnsemble(ensemble.members[:1], ensemble.weight_draws[:1], SchemaPoids.DIRICHLET, 0)
    assert parameter_covariance(ensemble).shape == (2, 2)


def test_separated_data_fails_the_ensemble(logistique):
    # séparation parfaite : chaque réplicat diverge
    data = LabeledDataset(np.array([[-2.0], [-1.0], [1.0], [2.0]]), np.array([0, 0, 1, 1]), 2)
    cfg = TrainingConfig(separation_norm=5.0, warm_start=False)
    with pytest.raises(BootstrapFailureError) as info:
        build_bootstrap_ensemble(logistique, data, 4, SchemaPoids.DIRICHLET, cfg)
    assert info.value.echecs == (0, 1, 2, 3)
