from __future__ import annotations

import math

import numpy as np
import pytest

from incertitude.information import (
    PredictionGrid,
    decompose_mi,
    deep_ensemble_mi,
    mutual_information,
    mutual_information_batch,
    true_class_spread,
    variance_ratio_mi,
)
from incertitude.noyau.erreurs import DimensionError, SimplexError, ValidationError
from incertitude.noyau.probabilite import PredictionMatrix, clip_rows

OPPOSEES = PredictionMatrix(np.array([[0.9, 0.1], [0.1, 0.9]]))


def _aleatoire(gen: np.random.Generator, forme) -> np.ndarray:
    return clip_rows(gen.dirichlet(np.ones(forme[-1]), size=forme[:-1]))


def test_mutual_information_worked_example():
    estimation = mutual_information(OPPOSEES)
    assert estimation.mi == pytest.approx(0.3680642, abs=1e-7)
    assert estimation.total_entropy == pytest.approx(0.6931472, abs=1e-7)
    assert estimation.mean_entropy == pytest.approx(0.3250830, abs=1e-7)
    assert estimation.member_count == 2


def test_identical_members_carry_no_information():
    m = PredictionMatrix(np.tile([0.2, 0.5, 0.3], (4, 1)))
    assert mutual_information(m).mi == pytest.approx(0.0, abs=1e-15)
    assert mutual_information(PredictionMatrix(np.array([[0.3, 0.7]]))).mi == 0.0


def test_mutual_information_properties():
    gen = np.random.default_rng(0)
    for _ in range(30):
        rows = _aleatoire(gen, (6, 4))
        estimation = mutual_information(PredictionMatrix(rows))
        assert 0.0 <= estimation.mi <= np.log(4) + 1e-12
        assert estimation.mi == pytest.approx(estimation.total_entropy - estimation.mean_entropy, abs=1e-12)
        # invariance par permutation des membres
        permutee = mutual_information(PredictionMatrix(rows[::-1]))
        assert permutee.mi == pytest.approx(estimation.mi, abs=1e-12)
        melangee = mutual_information(PredictionMatrix(rows[gen.permutation(6)]))
        assert melangee.mi == pytest.approx(estimation.mi, abs=1e-12)


def test_mutual_information_is_zero_only_for_identical_members():
    gen = np.random.default_rng(4)
    for _ in range(500):
        b = int(gen.integers(3, 9))
        k = int(gen.choice([2, 3, 10]))
        rows = _aleatoire(gen, (b, k))
        assert mutual_information(PredictionMatrix(rows)).mi > 1e-9
        identiques = np.tile(rows[0], (b, 1))
        assert mutual_information(PredictionMatrix(identiques)).mi == pytest.approx(0.0, abs=1e-9)


def test_deep_ensemble_mi_is_the_same_estimator():
    assert deep_ensemble_mi(OPPOSEES) == mutual_information(OPPOSEES)


def test_batch_matches_pointwise():
    gen = np.random.default_rng(1)
    probs = _aleatoire(gen, (5, 7, 3))
    lot = mutual_information_batch(probs)
    assert len(lot) == 7
    for j in range(7):
        assert lot.mi[j] == pytest.approx(mutual_information(PredictionMatrix(probs[:, j, :])).mi, abs=1e-12)
    assert lot.estimate(0).member_count == 5
    with pytest.raises(DimensionError):
        mutual_information_batch(probs[0])
    with pytest.raises(SimplexError):
        mutual_information_batch(np.full((2, 1, 2), 0.7))


def test_decomposition_identity():
    gen = np.random.default_rng(2)
    for _ in range(1000):
        b, s = (int(v) for v in gen.integers(2, 7, size=2))
        k = int(gen.choice([2, 3, 10]))
        d = decompose_mi(PredictionGrid(_aleatoire(gen, (b, s, k))))
        assert d.resampling + d.seeds == pytest.approx(d.total.mi, abs=1e-10)
        assert d.seeds >= -1e-12
        assert d.resampling >= -1e-12
        assert (d.dataset_count, d.seed_count) == (b, s)


def _entropie_scalaire(p) -> float:
    return -sum(v * math.log(v) for v in p)


def _moyenne(vecteurs):
    return [sum(v[j] for v in vecteurs) / len(vecteurs) for j in range(len(vecteurs[0]))]


def test_decomposition_two_by_two_grid():
    cellules = [[[0.9, 0.1], [0.7, 0.3]], [[0.6, 0.4], [0.8, 0.2]]]
    q_b = [_moyenne(ligne) for ligne in cellules]
    q = _moyenne(q_b)
    toutes = [c for ligne in cellules for c in ligne]
    attendu_total = _entropie_scalaire(q) - sum(_entropie_scalaire(c) for c in toutes) / 4
    attendu_reech = _entropie_scalaire(q) - sum(_entropie_scalaire(v) for v in q_b) / 2
    attendu_graines = sum(
        _entropie_scalaire(q_b[i]) - sum(_entropie_scalaire(c) for c in cellules[i]) / 2 for i in range(2)
    ) / 2

    d = decompose_mi(PredictionGrid(np.array(cellules)))
    assert d.total.mi == pytest.approx(attendu_total, abs=1e-12)
    assert d.resampling == pytest.approx(attendu_reech, abs=1e-12)
    assert d.seeds == pytest.approx(attendu_graines, abs=1e-12)
    assert d.resampling + d.seeds == pytest.approx(d.total.mi, abs=1e-12)
    # valeurs calculées à la main
    assert d.total.mi == pytest.approx(0.0349948, abs=1e-6)
    assert d.seeds == pytest.approx(0.0282930, abs=1e-6)
    assert d.resampling == pytest.approx(0.0067018, abs=1e-6)


def test_decomposition_extremes():
    # graines sans effet : tout vient du rééchantillonnage
    lignes = np.array([[0.9, 0.1], [0.1, 0.9]])
    sans_graines = PredictionGrid(np.repeat(lignes[:, None, :], 2, axis=1))
    d = decompose_mi(sans_graines)
    assert d.seeds == pytest.approx(0.0, abs=1e-12)
    assert d.resampling == pytest.approx(0.3680642, abs=1e-7)

    # jeux bootstrap sans effet : tout vient des graines
    sans_reechantillonnage = PredictionGrid(np.repeat(lignes[None, :, :], 3, axis=0))
    d = decompose_mi(sans_reechantillonnage)
    assert d.resampling == pytest.approx(0.0, abs=1e-12)
    assert d.seeds == pytest.approx(0.3680642, abs=1e-7)


def test_prediction_grid_validation():
    with pytest.raises(ValidationError):
        PredictionGrid(np.full((1, 3, 2), 0.5))
    with pytest.raises(ValidationError):
        PredictionGrid(np.full((3, 1, 2), 0.5))
    with pytest.raises(DimensionError):
        PredictionGrid.from_cells([[[0.5, 0.5], [0.5, 0.5]], [[0.5, 0.5]]])
    grille = PredictionGrid.from_cells([[[0.5, 0.5], [0.4, 0.6]], [[0.3, 0.7], [0.2, 0.8]]])
    assert grille.flattened().member_count == 4


def test_variance_ratio_and_spread_worked_examples():
    assert variance_ratio_mi(OPPOSEES) == pytest.approx(0.32, abs=1e-12)
    assert true_class_spread(OPPOSEES, 0) == pytest.approx(0.4, abs=1e-12)
    un = PredictionMatrix(np.array([[0.3, 0.7]]))
    with pytest.raises(ValidationError):
        variance_ratio_mi(un)
    with pytest.raises(ValidationError):
        true_class_spread(OPPOSEES, 2)


def test_variance_ratio_tracks_small_spreads():
    # développement d'ordre 2 : très proche de l'information pour de petites dispersions
    gen = np.random.default_rng(5)
    centre = np.array([0.2, 0.3, 0.5])
    bruit = 1e-4 * gen.standard_normal((50, 3))
    bruit -= bruit.mean(axis=1, keepdims=True)
    m = PredictionMatrix(centre + bruit)
    assert variance_ratio_mi(m) == pytest.approx(mutual_information(m).mi, rel=1e-2)
