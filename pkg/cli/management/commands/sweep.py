# sweep.py - Bornes inférieures see-saw pour une suite de dimensions d'ancilla
import logging

from construction.catalog import CATALOG
from games.models import QCGame
from seesaw.models import SeeSawConfig
from seesaw.optimizer import sweep_enlg, sweep_qc

from ...exceptions import FileFormatError
from ...files import load_catalog_game, load_game
from ...reports import sweep_csv, write_sweep_report
from ..base import DomainCommand

logger = logging.getLogger(__name__)


def parse_dims(value):
    """
    "1,2,3" -> [(1, 1), (2, 2), (3, 3)] ; "1x2,2x2" -> [(1, 2), (2, 2)].
    """
    dims = []
    for item in value.split(","):
        item = item.strip().lower()
        try:
            if "x" in item:
                du, dv = (int(part) for part in item.split("x"))
            else:
                du = dv = int(item)
        except ValueError:
            raise FileFormatError("--dims", f"élément '{item}' invalide")
        if du < 1 or dv < 1:
            raise FileFormatError("--dims", f"dimension '{item}' non positive")
        dims.append((du, dv))
    return dims


class Command(DomainCommand):
    help = "Balayage see-saw en dimension ; écrit le rapport CSV (N, borne, relances, tours, durée)."

    def add_arguments(self, parser):
        parser.add_argument("game", nargs="?", help="Fichier du jeu (qc ou enlg)")
        parser.add_argument("--catalog", help=f"Jeu du catalogue ({', '.join(sorted(CATALOG))})")
        parser.add_argument("--dims", default="1,2", help='Dimensions d\'ancilla, "1,2,3" ou "1x2,2x2"')
        parser.add_argument("--seed", type=int)
        parser.add_argument("--restarts", type=int)
        parser.add_argument("--max-rounds", type=int)
        parser.add_argument("--tol", type=float, help="Gain minimal par tour")
        parser.add_argument("--workers", type=int, help="Relances exécutées en parallèle")
        parser.add_argument("--output", help="Fichier CSV ; sinon le rapport suit le résumé")
        parser.add_argument(
            "--no-wall-time",
            action="store_true",
            help="Écrit 0.000 dans la colonne des durées (rapport reproductible)",
        )

    def run(self, game=None, catalog=None, dims=None, output=None, **options):
        if (game is None) == (catalog is None):
            raise FileFormatError(game or "-", "indiquer un fichier de jeu ou --catalog")
        if catalog is not None:
            loaded, reference = load_catalog_game(catalog), f"catalog:{catalog}"
        else:
            loaded, reference = load_game(game), str(game)

        dims_list = parse_dims(dims)
        config = SeeSawConfig.from_settings(
            ancilla_dims=dims_list[0],
            seed=options.get("seed"),
            restarts=options.get("restarts"),
            max_rounds=options.get("max_rounds"),
            improve_tol=options.get("tol"),
            workers=options.get("workers"),
        )
        runner = sweep_qc if isinstance(loaded, QCGame) else sweep_enlg
        rows = runner(loaded, dims_list, config)

        wall_time = not options.get("no_wall_time", False)
        report = sweep_csv(rows, wall_time)
        if output:
            write_sweep_report(output, rows, wall_time)
            logger.info("Rapport de balayage écrit dans %s", output)

        bounds = [row.lower_bound for row in rows]
        summary = {
            "game": reference,
            "seed": config.seed,
            "restarts": config.restarts,
            "rows": [
                {"N": row.total_dim, "ancilla_dims": list(row.ancilla_dims), "lower_bound": row.lower_bound}
                for row in rows
            ],
            "non_decreasing": all(b >= a for a, b in zip(bounds, bounds[1:])),
            "output": output,
        }
        lines = [f"Rapport écrit dans {output}"] if output else report.splitlines()
        return summary, lines
