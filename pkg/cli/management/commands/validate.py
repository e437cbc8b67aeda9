# validate.py - Rapport de validation d'un document (jeu ou stratégie)
from games.exceptions import ValidationFailed
from games.models import QCGame
from games.validators import is_xor_game

from ...files import GAME_KINDS, STRATEGY_KINDS, load_game, parse_document, validation_report
from ..base import DomainCommand


class Command(DomainCommand):
    help = "Vérifie les invariants d'un jeu ou d'une stratégie (et sa compatibilité avec --game)."

    def add_arguments(self, parser):
        parser.add_argument("path", help="Document à vérifier")
        parser.add_argument("--game", help="Jeu auquel confronter une stratégie")

    def run(self, path=None, game=None, **options):
        loaded = parse_document(path, GAME_KINDS + STRATEGY_KINDS)
        reference = load_game(game) if game else None
        report = validation_report(loaded, reference)
        if not report.ok:
            raise ValidationFailed(report)

        summary = {"path": str(path), "report": report.as_dict()}
        if isinstance(loaded, QCGame):
            summary["xor"] = is_xor_game(loaded)
        return summary, [str(report)]
