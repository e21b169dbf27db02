from __future__ import annotations

import logging

import pytest

from incertitude.experiences import simulate_logistic
from incertitude.modeles.types import ModelSpec, TypeModele
from incertitude.noyau.alea import RngStream
from incertitude.noyau.donnees import LabeledDataset


@pytest.fixture
def logistique() -> ModelSpec:
    return ModelSpec(TypeModele.LOGISTIQUE, 1, 2)


@pytest.fixture
def donnees_logistiques() -> LabeledDataset:
    # θ0 = (0.5, 1.5), x ~ N(0, 1)
    return simulate_logistic((0.5, 1.5), 200, RngStream(7, 0))


@pytest.fixture
def petit_mlp() -> ModelSpec:
    return ModelSpec(TypeModele.MLP, 2, 3, hidden_layers=(4,))


@pytest.fixture(autouse=True)
def journal_isole():
    # la CLI installe un handler et coupe la propagation du logger du paquet
    yield
    journal = logging.getLogger("incertitude")
    for handler in list(journal.handlers):
        journal.removeHandler(handler)
    journal.propagate = True
    journal.setLevel(logging.NOTSET)
