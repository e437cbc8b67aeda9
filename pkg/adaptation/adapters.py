# adapters.py - Transfert de stratégies entre un jeu QC G et le jeu étendu H construit
import logging
from fractions import Fraction

import numpy as np

from construction.builders import build_enlg, max_entangled, weyl_basis
from games.evaluation import enlg_win_prob, qc_win_prob
from games.models import ENLGStrategy, QCStrategy
from games.validators import (
    check_enlg_compatible,
    check_qc_compatible,
    ensure_valid,
    validate_qc_strategy,
    validate_enlg_strategy,
)
from linalg.models import RegisterShape
from linalg.operators import kron, permute_registers, projector

from .models import AdaptationReceipt

logger = logging.getLogger(__name__)

# (U, V, X', X, Y, Y') -> (U, X', X, Y, Y', V)
FORWARD_REORDER = (0, 2, 3, 4, 5, 1)


def _log_receipt(direction, receipt):
    if receipt.ok:
        logger.info(
            "%s : perte source %.12f, perte cible %.12f, échelle %s",
            direction, receipt.source_loss, receipt.target_loss, receipt.scale,
        )
    else:
        logger.warning(
            "%s : résidu %.3e au-delà de la tolérance", direction, receipt.residual
        )


# =============================================================================
# G -> H
# =============================================================================


def forward_state(game, strategy):
    """
    sigma ⊗ |ψ><ψ| ⊗ |φ><φ| réordonné en (U, X', X, Y, Y', V) :
    Alice détient (U, X'), l'arbitre (X, Y), Bob (Y', V).
    """
    n, m = game.n, game.m
    du, dv = strategy.dims
    assembled = kron(
        strategy.sigma,
        max_entangled(n).density(),
        max_entangled(m).density(),
    )
    shape = RegisterShape((du, dv, n, n, m, m))
    return permute_registers(assembled, shape, FORWARD_REORDER)


def forward_measurements(game, strategy):
    """
    Alice, question x : (I_U ⊗ conj(U_x)) A_a (I_U ⊗ U_x^T) sur U⊗X'.
    Bob, question y : (conj(V_y) ⊗ I_V) B_b (V_y^T ⊗ I_V) sur Y'⊗V.
    """
    du, dv = strategy.dims
    alice_ops = weyl_basis(game.n).ops
    bob_ops = weyl_basis(game.m).ops

    alice = []
    for u in alice_ops:
        rotation = kron(np.eye(du), u.conj())
        alice.append(rotation @ strategy.alice_povm @ rotation.conj().T)
    bob = []
    for v in bob_ops:
        rotation = kron(v.conj(), np.eye(dv))
        bob.append(rotation @ strategy.bob_povm @ rotation.conj().T)
    return np.stack(alice), np.stack(bob)


def adapt_qc_to_enlg(game, strategy, extended=None):
    """
    Stratégie pour H = build_enlg(G) dont la perte vaut exactement q_G / (nm).

    `extended` évite de reconstruire H quand l'appelant l'a déjà.
    """
    check_qc_compatible(game, strategy)
    ensure_valid(validate_qc_strategy(strategy))
    extended = extended if extended is not None else build_enlg(game)

    n, m = game.n, game.m
    du, dv = strategy.dims
    alice, bob = forward_measurements(game, strategy)
    adapted = ENLGStrategy(
        sigma=forward_state(game, strategy),
        dims=(du * n, n * m, m * dv),
        alice_povms=alice,
        bob_povms=bob,
    )

    receipt = AdaptationReceipt.from_losses(
        qc_win_prob(game, strategy).loss,
        enlg_win_prob(extended, adapted).loss,
        Fraction(1, n * m),
    )
    _log_receipt("G -> H", receipt)
    return adapted, receipt


# =============================================================================
# H -> G
# =============================================================================


def teleportation_basis(ops, side):
    """
    Projecteurs |β_x><β_x| de la base {(I ⊗ U_x^T)|ψ>} (side="right")
    ou {(V_y^T ⊗ I)|φ>} (side="left").
    """
    d = ops.shape[-1]
    psi = max_entangled(d).vector
    identity = np.eye(d)
    projectors = []
    for op in ops:
        factor = kron(identity, op.T) if side == "right" else kron(op.T, identity)
        projectors.append(projector(factor @ psi))
    return np.stack(projectors)


def backward_measurements(game, strategy):
    """
    Alice : A_a = Σ_x A^x_a ⊗ |β_x><β_x| sur (U, X', X).
    Bob : B_b = Σ_y |δ_y><δ_y| ⊗ B^y_b sur (Y, Y', V).
    """
    alice_basis = teleportation_basis(weyl_basis(game.n).ops, side="right")
    bob_basis = teleportation_basis(weyl_basis(game.m).ops, side="left")
    count_a = strategy.alice_povms.shape[1]
    count_b = strategy.bob_povms.shape[1]

    alice = np.stack(
        [
            sum(kron(strategy.alice_povms[x, a], beta) for x, beta in enumerate(alice_basis))
            for a in range(count_a)
        ]
    )
    bob = np.stack(
        [
            sum(kron(delta, strategy.bob_povms[y, b]) for y, delta in enumerate(bob_basis))
            for b in range(count_b)
        ]
    )
    return alice, bob


def adapt_enlg_to_qc(game, strategy, extended=None):
    """
    Stratégie pour G dont la perte vaut exactement nm * q_H ; l'état partagé
    est sigma lui-même, vu sur (U, X') ⊗ (Y', V).
    """
    extended = extended if extended is not None else build_enlg(game)
    check_enlg_compatible(extended, strategy)
    ensure_valid(validate_enlg_strategy(strategy))

    n, m = game.n, game.m
    du, _, dv = strategy.dims
    alice, bob = backward_measurements(game, strategy)
    adapted = QCStrategy(
        sigma=strategy.sigma,
        dims=(du * n, m * dv),
        alice_povm=alice,
        bob_povm=bob,
    )

    receipt = AdaptationReceipt.from_losses(
        enlg_win_prob(extended, strategy).loss,
        qc_win_prob(game, adapted).loss,
        Fraction(n * m),
    )
    _log_receipt("H -> G", receipt)
    return adapted, receipt
