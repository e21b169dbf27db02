from __future__ import annotations

import json
from pathlib import Path

import pandas as pd
import pytest

from incertitude.configuration import RunConfig, logging_config
from incertitude.noyau.erreurs import ValidationError
from incertitude.sortie import ResultEnvelope, artifact_paths, records_frame, write_envelope


def test_defaults():
    cfg = RunConfig()
    assert cfg.bootstrap == 100 and cfg.seeds == 5
    assert cfg.n_grid == (100, 400, 1600)
    assert cfg.effective_for("estimate").weights == "dirichlet"
    assert cfg.effective_for("influence").weights == "multinomial"
    assert RunConfig(weights="dirichlet").effective_for("influence").weights == "dirichlet"


def test_sources_are_layered(tmp_path: Path):
    fichier = tmp_path / "run.env"
    fichier.write_text("BOOTSTRAP=20\nseed=4\nn-grid=50,200\nintercept=non\n", encoding="utf-8")
    cfg = RunConfig.from_sources(fichier, {"seed": 9, "x_grid": "-1;0.5"})
    assert cfg.bootstrap == 20
    assert cfg.seed == 9
    assert cfg.n_grid == (50, 200)
    assert cfg.x_grid == (-1.0, 0.5)
    assert cfg.intercept is False


@pytest.mark.parametrize(
    "surcharges",
    [{"inconnu": 1}, {"bootstrap": 1}, {"seed": "abc"}, {"model": "cnn"}, {"weights": "poisson"},
     {"mcmc_steps": 100, "burn_in": 100}, {"theta0": "1"}, {"seeds": 2.5}, {"optimizer": "lbfgs"}],
)
def test_invalid_sources(surcharges):
    with pytest.raises(ValidationError):
        RunConfig.from_sources(None, surcharges)


def test_missing_config_file(tmp_path: Path):
    with pytest.raises(ValidationError):
        RunConfig.from_sources(tmp_path / "absent.env")


def test_log_level_from_environment(monkeypatch):
    monkeypatch.setenv("INCERTITUDE_LOG_LEVEL", "debug")
    assert logging_config()["loggers"]["incertitude"]["level"] == "DEBUG"
    monkeypatch.setenv("INCERTITUDE_LOG_LEVEL", "bavard")
    assert logging_config()["loggers"]["incertitude"]["level"] == "INFO"


def test_write_envelope(tmp_path: Path):
    env = ResultEnvelope(
        {"commande": "estimate", "config": RunConfig().as_dict()},
        records_frame([{"point": 0, "mi": 0.1 + 0.2}], ["point", "mi"]),
        {"parametres": records_frame([], ["source", "theta0"])},
    )
    chemins = write_envelope(env, tmp_path / "sortie" / "res.csv")
    assert chemins == artifact_paths(tmp_path / "sortie" / "res.csv", env)
    relu = pd.read_csv(chemins["records"])
    # %.17g : relecture exacte
    assert relu["mi"].iloc[0] == 0.1 + 0.2
    meta = json.loads(chemins["meta"].read_text(encoding="utf-8"))
    assert meta["config"]["n_grid"] == [100, 400, 1600]
    assert chemins["parametres"].name == "res.parametres.csv"
    assert chemins["meta"].name == "res.meta.json"
    assert sorted(p.name for p in (tmp_path / "sortie").iterdir()) == ["res.csv", "res.meta.json", "res.parametres.csv"]
