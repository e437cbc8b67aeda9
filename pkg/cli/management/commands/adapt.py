# adapt.py - Transfert d'une stratégie entre G et le jeu étendu H = build_enlg(G)
import logging

from adaptation.adapters import adapt_enlg_to_qc, adapt_qc_to_enlg
from adaptation.models import RESIDUAL_TOL

from ...files import load_game, load_strategy, strategy_document, write_document
from ..base import EXIT_RESIDUAL, DomainCommand

logger = logging.getLogger(__name__)

DIRECTIONS = {
    "qc-to-enlg": ("qc-strategy", adapt_qc_to_enlg),
    "enlg-to-qc": ("enlg-strategy", adapt_enlg_to_qc),
}


class Command(DomainCommand):
    help = "Adapte une stratégie de G vers H (qc-to-enlg) ou de H vers G (enlg-to-qc)."

    def add_arguments(self, parser):
        parser.add_argument("direction", choices=sorted(DIRECTIONS))
        parser.add_argument("game", help="Fichier du jeu QC G (H est reconstruit)")
        parser.add_argument("strategy", help="Fichier de la stratégie source")
        parser.add_argument("--output", required=True, help="Fichier de la stratégie adaptée")

    def run(self, direction=None, game=None, strategy=None, output=None, **options):
        kind, adapter = DIRECTIONS[direction]
        loaded = load_game(game, kinds=("qc",))
        source = load_strategy(strategy, kinds=(kind,))
        adapted, receipt = adapter(loaded, source)

        # Le fichier est écrit même hors tolérance pour pouvoir l'inspecter.
        write_document(output, strategy_document(adapted, receipt))
        summary = {
            "direction": direction,
            "game": loaded.name,
            "output": str(output),
            "receipt": receipt.as_dict(),
        }
        lines = [
            f"perte source : {receipt.source_loss:.12f}",
            f"perte cible  : {receipt.target_loss:.12f} (attendue {receipt.expected_target_loss:.12f}, facteur {receipt.scale})",
            f"résidu       : {receipt.residual:.3e}",
        ]
        if not receipt.ok:
            self.fail(
                EXIT_RESIDUAL,
                f"Résidu {receipt.residual:.3e} au-dessus de {RESIDUAL_TOL:g}",
                lines=lines,
                receipt=receipt.as_dict(),
                output=str(output),
            )
        return summary, lines
