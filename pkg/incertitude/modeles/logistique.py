from __future__ import annotations

import numpy as np

from .base import Modele, design, sigmoid
from .registre import enregistrer
from .types import TypeModele


@enregistrer(TypeModele.LOGISTIQUE)
class LogistiqueBinaire(Modele):
    """Régression logistique binaire : P(y = 1 | x, θ) = 1 / (1 + exp(−θ₁ᵀx − θ₀)).

    Disposition de θ : (θ₀, θ₁…θ_d) avec ordonnée, (θ₁…θ_d) sinon.
    """

    def parameter_count(self) -> int:
        return self.spec.input_dim + (1 if self.spec.includes_intercept else 0)

    def _z(self, X: np.ndarray) -> np.ndarray:
        return design(X, self.spec.includes_intercept)

    def _p1(self, theta: np.ndarray, X: np.ndarray) -> np.ndarray:
        return sigmoid(self._z(X) @ theta)

    def predict_batch(self, theta: np.ndarray, X: np.ndarray) -> np.ndarray:
        p1 = self._p1(theta, X)
        return np.column_stack([1.0 - p1, p1])

    def score_batch(self, theta: np.ndarray, X: np.ndarray, y: np.ndarray) -> np.ndarray:
        # ∂ ln p̂_y / ∂θ = (y − p) z
        return (y - self._p1(theta, X))[:, None] * self._z(X)

    def hessian(self, theta: np.ndarray, X: np.ndarray, y: np.ndarray, w: np.ndarray) -> np.ndarray:
        z = self._z(X)
        p1 = self._p1(theta, X)
        return -(z * (w * p1 * (1.0 - p1))[:, None]).T @ z

    def prediction_gradient(self, theta: np.ndarray, x: np.ndarray) -> np.ndarray:
        z = self._z(x.reshape(1, -1))[0]
        p1 = float(self._p1(theta, x.reshape(1, -1))[0])
        g1 = p1 * (1.0 - p1) * z
        return np.vstack([-g1, g1])

    def conditional_information(self, theta: np.ndarray, X: np.ndarray) -> np.ndarray:
        z = self._z(X)
        p1 = self._p1(theta, X)
        return (z * (p1 * (1.0 - p1))[:, None]).T @ z / X.shape[0]

    def penalty_mask(self) -> np.ndarray:
        masque = np.ones(self.parameter_count(), dtype=bool)
        if self.spec.includes_intercept:
            masque[0] = False
        return masque
