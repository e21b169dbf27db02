from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import numpy as np

from .base import Modele, softmax
from .registre import enregistrer
from .types import ModelSpec, TypeModele

Couche = Tuple[np.ndarray, np.ndarray]


@enregistrer(TypeModele.MLP)
class PerceptronMulticouche(Modele):
    """Perceptron multicouche à activations tanh et sortie softmax à K logits.

    Disposition de θ : pour chaque couche l (entrée vers sortie), la matrice
    W_l (sortie × entrée) aplatie ligne par ligne, puis le biais b_l.
    """

    def __init__(self, spec: ModelSpec) -> None:
        super().__init__(spec)
        self.tailles: List[int] = [spec.input_dim, *spec.hidden_layers, spec.class_count]
        self._bornes: List[Tuple[int, int, int]] = []
        debut: int = 0
        for entree, sortie in zip(self.tailles[:-1], self.tailles[1:]):
            fin_w: int = debut + sortie * entree
            self._bornes.append((debut, fin_w, fin_w + sortie))
            debut = fin_w + sortie
        self._p: int = debut

    @property
    def layer_count(self) -> int:
        return len(self._bornes)

    def parameter_count(self) -> int:
        return self._p

    # ------------------------------------------------------------------ disposition

    def _decouper(self, theta: np.ndarray) -> List[Couche]:
        couches: List[Couche] = []
        for (debut, fin_w, fin_b), entree, sortie in zip(self._bornes, self.tailles[:-1], self.tailles[1:]):
            couches.append((theta[debut:fin_w].reshape(sortie, entree), theta[fin_w:fin_b]))
        return couches

    def trailing_block(self, couches: int) -> np.ndarray:
        """Indices des paramètres des `couches` dernières couches (bloc non gelé)."""
        couches = max(1, min(int(couches), self.layer_count))
        debut: int = self._bornes[self.layer_count - couches][0]
        return np.arange(debut, self._p)

    def initial_parameters(self, rng: Optional[np.random.Generator], init_scale: float) -> np.ndarray:
        theta = np.zeros(self._p, dtype=np.float64)
        if rng is None:
            return theta
        for (debut, fin_w, _), entree in zip(self._bornes, self.tailles[:-1]):
            theta[debut:fin_w] = rng.standard_normal(fin_w - debut) * init_scale / np.sqrt(entree)
        return theta

    def penalty_mask(self) -> np.ndarray:
        masque = np.zeros(self._p, dtype=bool)
        for debut, fin_w, _ in self._bornes:
            masque[debut:fin_w] = True
        return masque

    # ------------------------------------------------------------------ propagation

    def _propager(self, couches: Sequence[Couche], X: np.ndarray) -> Tuple[List[np.ndarray], np.ndarray]:
        activations: List[np.ndarray] = [X]
        for W, b in couches[:-1]:
            activations.append(np.tanh(activations[-1] @ W.T + b))
        W_s, b_s = couches[-1]
        return activations, activations[-1] @ W_s.T + b_s

    def _retropropager(
        self,
        couches: Sequence[Couche],
        activations: Sequence[np.ndarray],
        delta: np.ndarray,
        par_echantillon: bool,
    ) -> np.ndarray:
        """Gradient de Σ_i δ_iᵀ z_L(x_i) ; `delta` est l'erreur n×K en sortie."""
        n: int = delta.shape[0]
        morceaux: List[np.ndarray] = [np.empty(0)] * (2 * len(couches))
        for l in range(len(couches) - 1, -1, -1):
            entree = activations[l]
            if par_echantillon:
                morceaux[2 * l] = np.einsum("io,ij->ioj", delta, entree).reshape(n, -1)
                morceaux[2 * l + 1] = delta
            else:
                morceaux[2 * l] = (delta.T @ entree).reshape(-1)
                morceaux[2 * l + 1] = delta.sum(axis=0)
            if l > 0:
                delta = (delta @ couches[l][0]) * (1.0 - entree ** 2)
        return np.concatenate(morceaux, axis=1 if par_echantillon else 0)

    def _un_parmi_k(self, y: np.ndarray) -> np.ndarray:
        out = np.zeros((y.shape[0], self.spec.class_count))
        out[np.arange(y.shape[0]), y] = 1.0
        return out

    # ------------------------------------------------------------------ API Modele

    def predict_batch(self, theta: np.ndarray, X: np.ndarray) -> np.ndarray:
        _, logits = self._propager(self._decouper(theta), X)
        return softmax(logits)

    def score_batch(self, theta: np.ndarray, X: np.ndarray, y: np.ndarray) -> np.ndarray:
        couches = self._decouper(theta)
        activations, logits = self._propager(couches, X)
        delta = self._un_parmi_k(y) - softmax(logits)
        return self._retropropager(couches, activations, delta, par_echantillon=True)

    def weighted_gradient(self, theta: np.ndarray, X: np.ndarray, y: np.ndarray, w: np.ndarray) -> np.ndarray:
        couches = self._decouper(theta)
        activations, logits = self._propager(couches, X)
        delta = w[:, None] * (self._un_parmi_k(y) - softmax(logits))
        return self._retropropager(couches, activations, delta, par_echantillon=False)

    def prediction_gradient(self, theta: np.ndarray, x: np.ndarray) -> np.ndarray:
        couches = self._decouper(theta)
        activations, logits = self._propager(couches, x.reshape(1, -1))
        p = softmax(logits)[0]
        k: int = self.spec.class_count
        lignes: List[np.ndarray] = []
        for j in range(k):
            # ∂p_j/∂z = p_j (e_j − p)
            delta = -p[j] * p
            delta[j] += p[j]
            lignes.append(self._retropropager(couches, activations, delta[None, :], par_echantillon=False))
        return np.vstack(lignes)

    def hessian_vector_product(
        self, theta: np.ndarray, X: np.ndarray, y: np.ndarray, w: np.ndarray, v: np.ndarray
    ) -> np.ndarray:
        """(∇² Σ w_i ln p̂_{y_i}(x_i; θ)) v par rétropropagation du second ordre (opérateur R)."""
        couches = self._decouper(theta)
        directions = self._decouper(v)
        activations: List[np.ndarray] = [X]
        r_activations: List[np.ndarray] = [np.zeros_like(X)]
        derniere: int = len(couches) - 1
        logits = r_logits = np.empty(0)
        for l, ((W, b), (V, c)) in enumerate(zip(couches, directions)):
            z = activations[-1] @ W.T + b
            rz = activations[-1] @ V.T + r_activations[-1] @ W.T + c
            if l < derniere:
                a = np.tanh(z)
                activations.append(a)
                r_activations.append((1.0 - a ** 2) * rz)
            else:
                logits, r_logits = z, rz
        p = softmax(logits)
        rp = p * (r_logits - (p * r_logits).sum(axis=1, keepdims=True))
        delta = w[:, None] * (self._un_parmi_k(y) - p)
        r_delta = -w[:, None] * rp

        morceaux: List[np.ndarray] = [np.empty(0)] * (2 * len(couches))
        for l in range(derniere, -1, -1):
            entree, r_entree = activations[l], r_activations[l]
            morceaux[2 * l] = (r_delta.T @ entree + delta.T @ r_entree).reshape(-1)
            morceaux[2 * l + 1] = r_delta.sum(axis=0)
            if l > 0:
                W, V = couches[l][0], directions[l][0]
                pente = 1.0 - entree ** 2
                retour = delta @ W
                r_retour = r_delta @ W + delta @ V
                r_delta = r_retour * pente + retour * (-2.0 * entree * r_entree)
                delta = retour * pente
        return np.concatenate(morceaux)

    def hessian(
        self,
        theta: np.ndarray,
        X: np.ndarray,
        y: np.ndarray,
        w: np.ndarray,
        indices: Optional[np.ndarray] = None,
    ) -> np.ndarray:
        """Hessien exact, restreint au bloc `indices` (tous les paramètres par défaut)."""
        idx = np.arange(self._p) if indices is None else np.asarray(indices)
        colonnes: List[np.ndarray] = []
        for j in idx:
            e = np.zeros(self._p)
            e[j] = 1.0
            colonnes.append(self.hessian_vector_product(theta, X, y, w, e)[idx])
        h = np.column_stack(colonnes)
        return 0.5 * (h + h.T)
