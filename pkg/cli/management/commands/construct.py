# construct.py - Jeu étendu H construit à partir d'un jeu QC G (ou pris au catalogue)
import logging

from construction.builders import build_enlg
from construction.catalog import CATALOG

from ...exceptions import FileFormatError
from ...files import document, load_catalog_game, load_game, write_document
from ..base import DomainCommand

logger = logging.getLogger(__name__)


class Command(DomainCommand):
    help = "Construit le jeu étendu H d'un jeu QC G et l'écrit dans --output."

    def add_arguments(self, parser):
        parser.add_argument("source", nargs="?", help="Fichier du jeu QC G")
        parser.add_argument("--catalog", help=f"Jeu du catalogue ({', '.join(sorted(CATALOG))})")
        parser.add_argument("--output", required=True, help="Fichier du jeu étendu écrit")

    def run(self, source=None, catalog=None, output=None, **options):
        if (source is None) == (catalog is None):
            raise FileFormatError(source or "-", "indiquer un fichier de jeu QC ou --catalog")

        summary = {}
        if catalog is not None:
            extended = load_catalog_game(catalog)
            summary["source"] = f"catalog:{catalog}"
        else:
            game = load_game(source, kinds=("qc",))
            extended = build_enlg(game)
            summary.update(source=str(source), n=game.n, m=game.m, s=game.s)

        write_document(output, document(extended))
        count_x, count_y = extended.question_sets
        summary.update(
            name=extended.name,
            questions=[count_x, count_y],
            answers=list(extended.answer_sets),
            ref_dim=extended.ref_dim,
            output=str(output),
        )
        logger.info("Jeu %s écrit dans %s", extended.name, output)
        return summary, [
            f"{extended.name} : |X| = {count_x}, |Y| = {count_y}, dim R = {extended.ref_dim}",
            f"Écrit dans {output}",
        ]
