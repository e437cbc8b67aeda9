# evaluate.py - Probabilités de gain et de perte d'une stratégie sur un jeu
from games.evaluation import enlg_win_prob, qc_win_prob
from games.models import QCGame
from games.validators import check_enlg_compatible, check_qc_compatible, is_xor_game

from ...files import load_game, load_strategy
from ..base import DomainCommand


class Command(DomainCommand):
    help = "Affiche p (gain) et 1 - p (perte) avec 12 décimales."

    def add_arguments(self, parser):
        parser.add_argument("game", help="Fichier du jeu (qc ou enlg)")
        parser.add_argument("strategy", help="Fichier de la stratégie")

    def run(self, game=None, strategy=None, **options):
        loaded = load_game(game)
        if isinstance(loaded, QCGame):
            chosen = load_strategy(strategy, kinds=("qc-strategy",))
            check_qc_compatible(loaded, chosen)
            probability = qc_win_prob(loaded, chosen)
            extra = {"xor": is_xor_game(loaded)}
        else:
            chosen = load_strategy(strategy, kinds=("enlg-strategy",))
            check_enlg_compatible(loaded, chosen)
            probability = enlg_win_prob(loaded, chosen)
            extra = {}

        win, lose = probability.raw, probability.loss
        summary = {
            "game": loaded.name,
            "total_dim": chosen.total_dim,
            "win_probability": win,
            "lose_probability": lose,
            **extra,
        }
        return summary, [f"gain  : {win:.12f}", f"perte : {lose:.12f}"]
