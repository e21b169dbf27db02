# incertitude/__main__.py
from __future__ import annotations

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from .configuration import RunConfig, configure_logging
from .experiences import COLONNES_ACTIF, COMMANDES_DONNEES, COMMANDES_SYNTHETIQUES
from .noyau.erreurs import ActiveLearningAborted, IncertitudeError
from .sortie import ResultEnvelope, records_frame, write_envelope

logger = logging.getLogger("incertitude.cli")

_NON_OPTIONS = {"cmd", "train", "test", "config"}


def _options_communes() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    g = parent.add_argument_group("options communes (défaut < --config < ligne de commande)")
    g.add_argument("--config", default=None, help="Fichier key=value de configuration.")
    g.add_argument("--seed", type=int)
    g.add_argument("--model", choices=["logistic", "binary-logistic", "softmax", "mlp"])
    g.add_argument("--bootstrap", type=int, help="Nombre B de réplicats bootstrap.")
    g.add_argument("--seeds", type=int, help="Nombre S de graines d'entraînement (et de membres en actif).")
    g.add_argument("--weights", choices=["dirichlet", "multinomial"])
    g.add_argument("--n", type=int, help="Taille des données simulées.")
    g.add_argument("--n-grid", help="Tailles séparées par des virgules.")
    g.add_argument("--x-grid", help="Abscisses de test séparées par des virgules.")
    g.add_argument("--theta0", help="Paramètre vrai : ordonnée puis pentes.")
    g.add_argument("--mcmc-steps", type=int)
    g.add_argument("--burn-in", type=int)
    g.add_argument("--thinning", type=int)
    g.add_argument("--damping", type=float)
    g.add_argument("--budget", type=int)
    g.add_argument("--repetitions", type=int)
    g.add_argument("--pool-size", type=int)
    g.add_argument("--hidden", help="Largeurs des couches cachées du MLP.")
    g.add_argument("--epochs", type=int)
    g.add_argument("--step-size", type=float)
    g.add_argument("--optimizer", choices=["newton", "gradient-descent"], help="Défaut : Newton pour un GLM, descente de gradient pour un MLP.")
    g.add_argument("--l2", type=float)
    g.add_argument("--redraws", type=int)
    g.add_argument("--test-points", type=int)
    g.add_argument("--workers", type=int)
    g.add_argument("--out", help="Fichier CSV des enregistrements (méta dans <nom>.meta.json à côté).")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parent = _options_communes()
    parser = argparse.ArgumentParser(
        prog="incertitude",
        description="Information mutuelle épistémique par bootstrap, oracle MCMC et formule asymptotique.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)
    aides = {
        "teaser": "Logistique simulée : bootstrap, MCMC et premier ordre sur une grille de x.",
        "asymptotic": "Convergence de n·I sur une grille de tailles.",
        "active": "Apprentissage actif sur un mélange gaussien à 4 classes.",
        "redraws": "Dispersion de la vraie classe : nouveaux tirages contre bootstrap.",
        "estimate": "Information mutuelle bootstrap pour chaque point de test.",
        "decompose": "Parts rééchantillonnage et graines sur une grille B×S.",
        "influence": "Bootstrap par fonctions d'influence contre réajustements exacts.",
    }
    for nom in COMMANDES_SYNTHETIQUES:
        sub.add_parser(nom, parents=[parent], help=aides[nom])
    for nom in COMMANDES_DONNEES:
        p = sub.add_parser(nom, parents=[parent], help=aides[nom])
        p.add_argument("train", help="CSV d'apprentissage (colonne label).")
        p.add_argument("test", help="CSV des points de test (label facultatif).")
    return parser


def _surcharges(args: argparse.Namespace) -> Dict[str, Any]:
    return {cle: v for cle, v in vars(args).items() if cle not in _NON_OPTIONS and v is not None}


def _executer(args: argparse.Namespace, cfg: RunConfig) -> ResultEnvelope:
    if args.cmd in COMMANDES_DONNEES:
        return COMMANDES_DONNEES[args.cmd](cfg, args.train, args.test)
    return COMMANDES_SYNTHETIQUES[args.cmd](cfg)


def _signaler(exc: IncertitudeError) -> int:
    message = str(exc).replace('"', "'")
    print(f'erreur code={exc.code_sortie} type={type(exc).__name__} message="{message}"', file=sys.stderr)
    return exc.code_sortie


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_sources(args.config, _surcharges(args))
    except IncertitudeError as exc:
        return _signaler(exc)
    try:
        envelope = _executer(args, cfg)
    except ActiveLearningAborted as exc:
        partiel = ResultEnvelope(
            {"commande": args.cmd, "interrompu": True, "raison": str(exc)},
            records_frame(exc.courbe, COLONNES_ACTIF),
        )
        try:
            write_envelope(partiel, cfg.out)
            logger.warning("courbe partielle écrite dans %s", cfg.out)
        except OSError as err:
            logger.error("écriture de la courbe partielle impossible : %s", err)
        return _signaler(exc)
    except IncertitudeError as exc:
        return _signaler(exc)

    write_envelope(envelope, cfg.out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
