from __future__ import annotations

from typing import Any, Optional, Sequence


class IncertitudeError(Exception):
    """Racine des erreurs du paquet."""

    code_sortie: int = 2


# ---------------------------------------------------------------------------
# Entrées invalides (code de sortie 2)
# ---------------------------------------------------------------------------

class ValidationError(IncertitudeError, ValueError):
    """Entrée invalide : dimensions, invariants, format."""

    code_sortie: int = 2


class SimplexError(ValidationError):
    """Vecteur hors du simplexe (bornes de clipping ou somme)."""


class DimensionError(ValidationError):
    """Dimensions incohérentes entre paramètres, données et poids."""


class DatasetFormatError(ValidationError):
    """Fichier CSV mal formé.

    Attributs
    ---------
    ligne : Optional[int]
        Numéro de ligne (1 = en-tête) concerné, si connu.
    """

    def __init__(self, message: str, ligne: Optional[int] = None) -> None:
        if ligne is not None:
            message = f"ligne {ligne}: {message}"
        super().__init__(message)
        self.ligne: Optional[int] = ligne


# ---------------------------------------------------------------------------
# Échecs numériques (code de sortie 3)
# ---------------------------------------------------------------------------

class NumericalError(IncertitudeError, ArithmeticError):
    """Échec numérique : non-convergence, singularité, divergence."""

    code_sortie: int = 3


class NonConvergedError(NumericalError):
    def __init__(self, iterations: int, norme_gradient: float) -> None:
        super().__init__(
            f"Newton non convergé après {iterations} itérations (|gradient|∞ = {norme_gradient:.3e})"
        )
        self.iterations: int = iterations
        self.norme_gradient: float = norme_gradient


class SeparationError(NumericalError):
    def __init__(self, norme: float) -> None:
        super().__init__(f"séparation parfaite probable : |θ| = {norme:.3e}")
        self.norme: float = norme


class DivergenceError(NumericalError):
    def __init__(self, epoque: int) -> None:
        super().__init__(f"perte non finie à l'époque {epoque}")
        self.epoque: int = epoque


class SingularMatrixError(NumericalError):
    def __init__(self, conditionnement: float, seuil: float) -> None:
        super().__init__(f"matrice singulière : conditionnement {conditionnement:.3e} > {seuil:.0e}")
        self.conditionnement: float = conditionnement


class PathologicalPosteriorError(NumericalError):
    """Toutes les propositions rejetées pendant trop de fenêtres consécutives."""


class BootstrapFailureError(NumericalError):
    def __init__(self, echecs: Sequence[int], total: int) -> None:
        super().__init__(f"{len(echecs)} réplicats bootstrap en échec sur {total} (> 10 %)")
        self.echecs: tuple[int, ...] = tuple(echecs)


class ActiveLearningAborted(NumericalError):
    """Interruption de la boucle active ; `courbe` contient les lignes déjà produites."""

    def __init__(self, message: str, courbe: Sequence[Any]) -> None:
        super().__init__(message)
        self.courbe: list[Any] = list(courbe)
