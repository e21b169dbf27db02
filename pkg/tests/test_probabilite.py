from __future__ import annotations

import numpy as np
import pytest

from incertitude.noyau.erreurs import SimplexError
from incertitude.noyau.probabilite import (
    EPS_CLIP,
    PredictionMatrix,
    ProbabilityVector,
    clip_and_normalize,
    entropy,
    mean_prediction,
    row_entropies,
)


def test_entropy_worked_values():
    assert entropy([0.5, 0.5]) == pytest.approx(0.6931472, abs=1e-7)
    assert entropy([0.9, 0.1]) == pytest.approx(0.3250830, abs=1e-7)
    assert entropy([0.25] * 4) == pytest.approx(np.log(4.0), abs=1e-12)
    assert entropy(np.full(10, 0.1)) == pytest.approx(np.log(10.0), abs=1e-12)


def test_entropy_is_bounded_by_log_k():
    gen = np.random.default_rng(3)
    for _ in range(50):
        p = clip_and_normalize(gen.random(5))
        assert 0.0 <= entropy(p) <= np.log(5.0) + 1e-12


def test_clip_and_normalize():
    assert np.allclose(clip_and_normalize([2, 6]).probs, [0.25, 0.75], atol=1e-15)
    assert np.array_equal(clip_and_normalize([0.25] * 4).probs, np.full(4, 0.25))
    # sommet : la coordonnée nulle est relevée au plancher
    sommet = clip_and_normalize([1.0, 0.0]).probs
    assert sommet[1] >= EPS_CLIP * (1 - 1e-9)
    assert abs(sommet.sum() - 1.0) <= 1e-9


@pytest.mark.parametrize("brut", [[], [-1.0, 2.0], [0.0, 0.0], [np.nan, 1.0]])
def test_clip_and_normalize_rejects(brut):
    with pytest.raises(SimplexError):
        clip_and_normalize(brut)


@pytest.mark.parametrize("probs", [[0.5, 0.6], [1.0, 0.0], [0.3, 0.3, 0.3]])
def test_probability_vector_invariants(probs):
    with pytest.raises(SimplexError):
        ProbabilityVector(np.array(probs))


def test_probability_vector_is_read_only():
    p = ProbabilityVector(np.array([0.2, 0.8]))
    with pytest.raises(ValueError):
        p.probs[0] = 0.5


def test_mean_prediction_and_row_entropies():
    m = PredictionMatrix(np.array([[0.2, 0.8], [0.4, 0.6], [0.6, 0.4]]))
    assert np.allclose(mean_prediction(m).probs, [0.4, 0.6], atol=1e-15)
    attendu = [entropy(ligne) for ligne in m.rows]
    assert np.allclose(row_entropies(m.rows), attendu, atol=1e-15)


def test_prediction_matrix_rejects_bad_rows():
    with pytest.raises(SimplexError):
        PredictionMatrix(np.array([[0.5, 0.5], [0.9, 0.2]]))
    with pytest.raises(SimplexError):
        PredictionMatrix(np.empty((0, 2)))
