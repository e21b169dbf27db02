"""Sous-package « modeles » : classifieurs paramétriques (logistique, softmax, MLP)."""
