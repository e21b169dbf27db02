from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Décalages des identifiants de sous-flux dérivés d'une même graine maître.
# Réplicat bootstrap b -> b ; graine d'entraînement s -> 2^32 + s.
DECALAGE_ENTRAINEMENT: int = 2 ** 32
DECALAGE_REPRISE: int = 2 ** 33
DECALAGE_SIMULATION: int = 2 ** 34
DECALAGE_MCMC: int = 2 ** 35
DECALAGE_SCORES: int = 2 ** 36

_MASQUE_64: int = 2 ** 64 - 1


@dataclass(frozen=True)
class RngStream:
    """Sous-flux aléatoire identifié par (graine maître, identifiant de flux).

    Deux couples distincts donnent des suites indépendantes (via `SeedSequence`) ;
    un même couple redonne exactement la même suite.
    """

    master_seed: int
    stream_id: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "master_seed", int(self.master_seed) & _MASQUE_64)
        object.__setattr__(self, "stream_id", int(self.stream_id) & _MASQUE_64)

    def generator(self) -> np.random.Generator:
        """Nouveau générateur PCG64 positionné au début du sous-flux."""
        sequence = np.random.SeedSequence([self.master_seed, self.stream_id])
        return np.random.Generator(np.random.PCG64(sequence))


def replicate_stream(master_seed: int, b: int) -> RngStream:
    return RngStream(master_seed, b)


def training_stream(master_seed: int, s: int) -> RngStream:
    return RngStream(master_seed, DECALAGE_ENTRAINEMENT + s)


def derive_seed(master_seed: int, *cles: int) -> int:
    """Graine maître dérivée pour un contexte imbriqué (étape active, taille n, répétition…)."""
    entropie = [int(master_seed) & _MASQUE_64] + [int(c) & _MASQUE_64 for c in cles]
    etat = np.random.SeedSequence(entropie).generate_state(1, dtype=np.uint64)
    return int(etat[0])
