from __future__ import annotations

import numpy as np

from .base import Modele, design, softmax
from .registre import enregistrer
from .types import TypeModele


@enregistrer(TypeModele.SOFTMAX)
class RegressionSoftmax(Modele):
    """Régression multinomiale à classe de référence K−1 (logit nul).

    θ est la matrice (K−1)×q aplatie ligne par ligne, q = d + 1 avec ordonnée :
    le bloc k contient [θ_k0, θ_k1, …, θ_kd]. La classe de référence rend le
    modèle identifiable et l'information de Fisher inversible.
    """

    def _q(self) -> int:
        return self.spec.input_dim + (1 if self.spec.includes_intercept else 0)

    def parameter_count(self) -> int:
        return (self.spec.class_count - 1) * self._q()

    def _z(self, X: np.ndarray) -> np.ndarray:
        return design(X, self.spec.includes_intercept)

    def _blocs(self, theta: np.ndarray) -> np.ndarray:
        return theta.reshape(self.spec.class_count - 1, self._q())

    def predict_batch(self, theta: np.ndarray, X: np.ndarray) -> np.ndarray:
        eta = self._z(X) @ self._blocs(theta).T
        logits = np.hstack([eta, np.zeros((eta.shape[0], 1))])
        return softmax(logits)

    def score_batch(self, theta: np.ndarray, X: np.ndarray, y: np.ndarray) -> np.ndarray:
        z = self._z(X)
        probs = self.predict_batch(theta, X)
        k1: int = self.spec.class_count - 1
        residus = -probs[:, :k1]
        lignes = np.arange(X.shape[0])
        non_ref = y < k1
        residus[lignes[non_ref], y[non_ref]] += 1.0
        return (residus[:, :, None] * z[:, None, :]).reshape(X.shape[0], -1)

    def _covariances(self, probs: np.ndarray) -> np.ndarray:
        # diag(p̃) − p̃ p̃ᵀ pour chaque ligne, p̃ = probabilités hors référence
        p = probs[:, : self.spec.class_count - 1]
        cov = -p[:, :, None] * p[:, None, :]
        idx = np.arange(p.shape[1])
        cov[:, idx, idx] += p
        return cov

    def hessian(self, theta: np.ndarray, X: np.ndarray, y: np.ndarray, w: np.ndarray) -> np.ndarray:
        z = self._z(X)
        cov = self._covariances(self.predict_batch(theta, X))
        h = np.einsum("i,iab,ic,id->acbd", w, cov, z, z, optimize=True)
        p: int = self.parameter_count()
        return -h.reshape(p, p)

    def prediction_gradient(self, theta: np.ndarray, x: np.ndarray) -> np.ndarray:
        xx = x.reshape(1, -1)
        z = self._z(xx)[0]
        probs = self.predict_batch(theta, xx)[0]
        k: int = self.spec.class_count
        # J[j, k] = p_j (δ_jk − p_k), k < K−1
        jac = -probs[:, None] * probs[None, : k - 1]
        jac[np.arange(k - 1), np.arange(k - 1)] += probs[: k - 1]
        return (jac[:, :, None] * z[None, None, :]).reshape(k, -1)

    def conditional_information(self, theta: np.ndarray, X: np.ndarray) -> np.ndarray:
        z = self._z(X)
        cov = self._covariances(self.predict_batch(theta, X))
        h = np.einsum("iab,ic,id->acbd", cov, z, z, optimize=True) / X.shape[0]
        p: int = self.parameter_count()
        return h.reshape(p, p)

    def penalty_mask(self) -> np.ndarray:
        masque = np.ones((self.spec.class_count - 1, self._q()), dtype=bool)
        if self.spec.includes_intercept:
            masque[:, 0] = False
        return masque.reshape(-1)
