# catalog.py - Jeux de référence disponibles
from construction.catalog import CATALOG, catalog_game

from ...files import document, load_catalog_game, write_document
from ..base import DomainCommand


class Command(DomainCommand):
    help = "Liste les jeux du catalogue ; avec un nom, décrit le jeu et l'écrit dans --output."

    def add_arguments(self, parser):
        parser.add_argument("name", nargs="?")
        parser.add_argument("--output")

    def run(self, name=None, output=None, **options):
        if name is None:
            games = [catalog_game(key) for key in sorted(CATALOG)]
            summary = {"games": [game.name for game in games]}
            return summary, [f"{game.name} : {game.description}" for game in games]

        game = load_catalog_game(name)
        if output:
            write_document(output, document(game))
        summary = {
            "name": game.name,
            "questions": list(game.question_sets),
            "answers": list(game.answer_sets),
            "ref_dim": game.ref_dim,
            "output": output,
        }
        return summary, [game.description]
