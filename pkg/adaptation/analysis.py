# analysis.py - Opérateurs de perte R0 pour la vérification indépendante des identités
import numpy as np

from construction.builders import build_enlg
from games.evaluation import payoff_operator, qc_payoff_operator
from games.validators import check_enlg_compatible, check_qc_compatible
from linalg.models import RegisterShape
from linalg.operators import kron, permute_registers

from .adapters import backward_measurements, forward_measurements

# (U, X', Y', V, X, S, Y) -> (U, X', X, S, Y, Y', V)
BACKWARD_REORDER = (0, 1, 4, 5, 6, 2, 3)


def loss_operator_h(game, strategy, extended=None):
    """
    R0 sur (U, X', X, Y, Y', V) : issue perdante de H pour la stratégie adaptée.
    R1 = I - R0.
    """
    check_qc_compatible(game, strategy)
    extended = extended if extended is not None else build_enlg(game)
    alice, bob = forward_measurements(game, strategy)
    return payoff_operator(extended, alice, bob, outcome="lose")


def loss_operator_g(game, strategy, extended=None):
    """R0 sur (U, X', X, S, Y, Y', V) : issue perdante de G pour la stratégie adaptée."""
    extended = extended if extended is not None else build_enlg(game)
    check_enlg_compatible(extended, strategy)
    alice, bob = backward_measurements(game, strategy)
    return qc_payoff_operator(game, alice, bob, outcome="lose")


def backward_joint_state(game, strategy):
    """W(sigma ⊗ rho)W* avec sigma lu sur (U, X', Y', V)."""
    du, _, dv = strategy.dims
    n, s, m = game.dims
    shape = RegisterShape((du, n, m, dv, n, s, m))
    return permute_registers(kron(strategy.sigma, game.rho), shape, BACKWARD_REORDER)


def expectation(operator, state):
    return float(np.real(np.trace(operator @ state)))
