from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from incertitude.lecture import parse_dataset_csv, read_test_points
from incertitude.noyau.erreurs import DatasetFormatError


def _ecrire(tmp_path: Path, texte: str, nom: str = "donnees.csv") -> Path:
    p = tmp_path / nom
    p.write_text(texte, encoding="utf-8")
    return p


def test_parse_keeps_row_and_column_order(tmp_path: Path):
    p = _ecrire(tmp_path, "x1,label,x2\n0.5,1,-1\n2,0,3.25\n")
    data = parse_dataset_csv(p)
    assert np.array_equal(data.features, [[0.5, -1.0], [2.0, 3.25]])
    assert data.labels.tolist() == [1, 0]
    assert data.class_count == 2


def test_class_count_can_exceed_observed_labels(tmp_path: Path, caplog):
    p = _ecrire(tmp_path, "x,label\n1,0\n2,2\n")
    data = parse_dataset_csv(p)
    assert data.class_count == 3
    assert "classes sans exemple [1]" in caplog.text
    assert parse_dataset_csv(p, class_count=5).class_count == 5
    with pytest.raises(DatasetFormatError):
        parse_dataset_csv(p, class_count=2)


@pytest.mark.parametrize(
    "texte, ligne",
    [
        ("x,label\n1,0\nabc,1\n", 3),
        ("x,label\n1,0\n2,1\ninf,0\n", 4),
        ("x,label\n1,0.5\n", 2),
        ("x,label\n1,-1\n", 2),
        ("x,y\n1,0\n", 1),
        ("x,label\n", 1),
    ],
)
def test_format_errors_carry_the_line(tmp_path: Path, texte: str, ligne: int):
    with pytest.raises(DatasetFormatError) as info:
        parse_dataset_csv(_ecrire(tmp_path, texte))
    assert info.value.ligne == ligne


def test_empty_and_missing_files(tmp_path: Path):
    with pytest.raises(DatasetFormatError) as info:
        parse_dataset_csv(_ecrire(tmp_path, ""))
    assert info.value.ligne == 1
    with pytest.raises(DatasetFormatError):
        parse_dataset_csv(tmp_path / "absent.csv")


def test_test_points_label_is_optional(tmp_path: Path):
    sans = read_test_points(_ecrire(tmp_path, "x1,x2\n0,1\n2,3\n", "a.csv"))
    assert sans.labels is None and sans.n == 2
    avec = read_test_points(_ecrire(tmp_path, "x1,x2,label\n0,1,2\n", "b.csv"))
    assert avec.labels.tolist() == [2]
    assert np.array_equal(avec.features, [[0.0, 1.0]])
