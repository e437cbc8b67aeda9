# relations.py - Relation entre les valeurs de G et du jeu étendu H construit
import logging

from adaptation.adapters import adapt_enlg_to_qc, adapt_qc_to_enlg
from construction.builders import build_enlg
from games.evaluation import enlg_win_prob, qc_win_prob
from games.exceptions import CertificationFailed

from .models import RelationReport
from .optimizer import seesaw_enlg, seesaw_qc

logger = logging.getLogger(__name__)


def value_relation_check(game, config):
    """
    v_G à dimension N = dim U * dim V et v_H à dimension nmN.

    La meilleure stratégie de G, adaptée vers H, certifie
    v_H >= 1 - (1 - v_G)/(nm) quelle que soit la qualité de l'optimisation ;
    elle sert aussi de point de départ à la première relance sur H.
    La meilleure stratégie de H, adaptée vers G, donne le témoin inverse
    1 - nm(1 - v_H) à dimension nm * nmN.
    """
    n, m = game.n, game.m
    du, dv = config.ancilla_dims
    extended = build_enlg(game)

    qc_report = seesaw_qc(game, config)
    adapted, _ = adapt_qc_to_enlg(game, qc_report.best_strategy, extended)
    adapted_value = enlg_win_prob(extended, adapted).raw

    enlg_report = seesaw_enlg(extended, config.with_dims((du * n, m * dv)), initial=adapted)
    back, _ = adapt_enlg_to_qc(game, enlg_report.best_strategy, extended)
    backward_value = qc_win_prob(game, back).raw

    report = RelationReport(
        v_g=qc_report.best_value,
        v_h=enlg_report.best_value,
        scale=n * m,
        adapted_value=adapted_value,
        backward_value=backward_value,
        qc_report=qc_report,
        enlg_report=enlg_report,
    )
    logger.info(
        "Relation : v_G=%.12f, v_H=%.12f, borne 1-(1-v_G)/nm=%.12f",
        report.v_g, report.v_h, report.forward_bound,
    )
    if not report.holds:
        raise CertificationFailed(
            f"v_H = {report.certified_v_h!r} sous la borne {report.forward_bound!r}"
        )
    return report
