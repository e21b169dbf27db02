from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pandas as pd

from incertitude.__main__ import main
from incertitude.experiences import COMMANDES_SYNTHETIQUES
from incertitude.noyau.erreurs import ActiveLearningAborted


def _diagnostics(err: str) -> list[str]:
    return [ligne for ligne in err.splitlines() if ligne.startswith("erreur ")]


def _train(tmp_path: Path, X: np.ndarray, y: np.ndarray) -> Path:
    chemin = tmp_path / "train.csv"
    table = pd.DataFrame({"x": X})
    table["label"] = y
    table.to_csv(chemin, index=False)
    return chemin


def _test(tmp_path: Path) -> Path:
    chemin = tmp_path / "test.csv"
    chemin.write_text("x\n-1\n0\n1\n", encoding="utf-8")
    return chemin


def test_estimate_writes_records_and_meta(tmp_path: Path):
    gen = np.random.default_rng(0)
    x = gen.standard_normal(60)
    train = _train(tmp_path, x, (gen.random(60) < 1 / (1 + np.exp(-2 * x))).astype(int))
    out = tmp_path / "res.csv"
    code = main(["estimate", str(train), str(_test(tmp_path)), "--bootstrap", "4", "--seed", "3", "--out", str(out)])
    assert code == 0
    records = pd.read_csv(out)
    assert records["point"].tolist() == [0, 1, 2]
    meta = json.loads((tmp_path / "res.meta.json").read_text(encoding="utf-8"))
    assert meta["config"]["bootstrap"] == 4 and meta["seed"] == 3
    assert meta["commande"] == "estimate"


def test_estimate_artifacts_do_not_depend_on_workers(tmp_path: Path):
    gen = np.random.default_rng(2)
    x = gen.standard_normal(80)
    train = _train(tmp_path, x, (gen.random(80) < 1 / (1 + np.exp(-1.5 * x))).astype(int))
    test = _test(tmp_path)
    sorties = {}
    for workers in ("1", "4"):
        dossier = tmp_path / f"w{workers}"
        code = main([
            "estimate", str(train), str(test),
            "--bootstrap", "8", "--seed", "11", "--workers", workers, "--out", str(dossier / "res.csv"),
        ])
        assert code == 0
        sorties[workers] = dossier

    un, quatre = sorties["1"], sorties["4"]
    assert (un / "res.csv").read_bytes() == (quatre / "res.csv").read_bytes()

    def _meta_stable(dossier: Path) -> dict:
        # la méta recopie la configuration effective (workers, out) et la durée
        meta = json.loads((dossier / "res.meta.json").read_text(encoding="utf-8"))
        meta.pop("duree_s")
        meta["config"].pop("workers")
        meta["config"].pop("out")
        return meta

    assert _meta_stable(un) == _meta_stable(quatre)
    assert json.loads((quatre / "res.meta.json").read_text(encoding="utf-8"))["config"]["workers"] == 4


def test_config_file_and_flags(tmp_path: Path):
    gen = np.random.default_rng(1)
    x = gen.standard_normal(40)
    train = _train(tmp_path, x, (x > 0).astype(int) ^ (gen.random(40) < 0.2))
    fichier = tmp_path / "run.env"
    fichier.write_text(f"bootstrap=3\nout={tmp_path / 'depuis_fichier.csv'}\n", encoding="utf-8")
    assert main(["estimate", str(train), str(_test(tmp_path)), "--config", str(fichier)]) == 0
    meta = json.loads((tmp_path / "depuis_fichier.meta.json").read_text(encoding="utf-8"))
    assert meta["config"]["bootstrap"] == 3


def test_malformed_csv_exits_with_code_2(tmp_path: Path, capsys):
    train = tmp_path / "train.csv"
    train.write_text("x,label\n1,0\noops,1\n", encoding="utf-8")
    out = tmp_path / "res.csv"
    assert main(["estimate", str(train), str(_test(tmp_path)), "--out", str(out)]) == 2
    diagnostics = _diagnostics(capsys.readouterr().err)
    assert len(diagnostics) == 1
    assert diagnostics[0].startswith("erreur code=2 type=DatasetFormatError")
    assert "ligne 3" in diagnostics[0]
    assert not out.exists()


def test_invalid_option_value_exits_with_code_2(capsys):
    assert main(["teaser", "--x-grid", "a,b"]) == 2
    assert _diagnostics(capsys.readouterr().err)[0].startswith("erreur code=2 type=ValidationError")


def test_singular_influence_exits_with_code_3(tmp_path: Path, capsys):
    train = _train(tmp_path, np.zeros(6), np.array([0, 1] * 3))
    out = tmp_path / "res.csv"
    code = main(["influence", str(train), str(_test(tmp_path)), "--damping", "0", "--bootstrap", "3", "--out", str(out)])
    assert code == 3
    assert _diagnostics(capsys.readouterr().err)[0].startswith("erreur code=3 type=SingularMatrixError")
    assert not out.exists()


def test_aborted_active_run_keeps_the_partial_curve(tmp_path: Path, monkeypatch, capsys):
    lignes = [{"step": 0, "n_labeled": 8, "accuracy": 0.5, "scorer": "random", "seed": 1, "repetition": 0}]

    def interrompu(cfg):
        raise ActiveLearningAborted("échec numérique", lignes)

    monkeypatch.setitem(COMMANDES_SYNTHETIQUES, "active", interrompu)
    out = tmp_path / "actif.csv"
    assert main(["active", "--out", str(out)]) == 3
    assert _diagnostics(capsys.readouterr().err)[0].startswith("erreur code=3 type=ActiveLearningAborted")
    partiel = pd.read_csv(out)
    assert partiel["accuracy"].tolist() == [0.5]
    assert json.loads((tmp_path / "actif.meta.json").read_text(encoding="utf-8"))["interrompu"] is True
