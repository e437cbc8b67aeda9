# evaluation.py - Probabilités de gain exactes (formules de trace)
import numpy as np

from linalg.models import RegisterShape, get_policy
from linalg.operators import hermitian_part, hs_inner, kron, permute_registers

from .exceptions import NonRealProbability
from .models import WinProbability
from .validators import check_enlg_compatible, check_qc_compatible

# (U, V, X, S, Y) -> (U, X, S, Y, V)
QC_REORDER = (0, 2, 3, 4, 1)


def as_probability(value, policy=None):
    """Un reste imaginaire au-delà de imag_tol signale une erreur de calcul."""
    policy = policy or get_policy()
    value = complex(value)
    if abs(value.imag) > policy.imag_tol:
        raise NonRealProbability(value)
    return WinProbability(value.real)


# =============================================================================
# JEUX QC
# =============================================================================


def qc_joint_state(game, sigma, dims):
    """W(sigma ⊗ rho)W* sur les registres (U, X, S, Y, V)."""
    du, dv = dims
    shape = RegisterShape((du, dv, game.n, game.s, game.m))
    return permute_registers(kron(sigma, game.rho), shape, QC_REORDER)


def qc_payoff_operator(game, alice_povm, bob_povm, outcome="win"):
    """
    Somme des A_a ⊗ Q_{a,b} ⊗ B_b sur (U, X, S, Y, V) ; `outcome="lose"`
    remplace Q_{a,b} par I - Q_{a,b}.
    """
    identity = np.eye(game.s)
    total = None
    for a, effect_a in enumerate(alice_povm):
        for b, effect_b in enumerate(bob_povm):
            referee = game.win_op(a, b)
            if outcome == "lose":
                referee = identity - referee
            term = kron(effect_a, referee, effect_b)
            total = term if total is None else total + term
    return total


def qc_win_prob(game, strategy):
    check_qc_compatible(game, strategy)
    joint = qc_joint_state(game, strategy.sigma, strategy.dims)
    payoff = qc_payoff_operator(game, strategy.alice_povm, strategy.bob_povm)
    return as_probability(hs_inner(hermitian_part(payoff), hermitian_part(joint)))


# =============================================================================
# JEUX NON LOCAUX ÉTENDUS
# =============================================================================


def payoff_operator(game, alice_povms, bob_povms, outcome="win"):
    """
    T = Σ π(x,y) A^x_a ⊗ P_{a,b,x,y} ⊗ B^y_b sur U⊗R⊗V ; p = <T, sigma>.
    Avec `outcome="lose"`, P est remplacé par I - P.
    """
    alice_povms = np.asarray(alice_povms)
    bob_povms = np.asarray(bob_povms)
    ref_ops = game.ref_ops
    if outcome == "lose":
        ref_ops = np.eye(game.ref_dim) - ref_ops
    tensor = np.einsum(
        "xy,xaij,abxykl,ybmn->ikmjln",
        game.pi,
        alice_povms,
        ref_ops,
        bob_povms,
        optimize=True,
    )
    size = alice_povms.shape[-1] * game.ref_dim * bob_povms.shape[-1]
    return tensor.reshape(size, size)


def enlg_win_prob(game, strategy):
    check_enlg_compatible(game, strategy)
    payoff = payoff_operator(game, strategy.alice_povms, strategy.bob_povms)
    return as_probability(hs_inner(hermitian_part(payoff), hermitian_part(strategy.sigma)))
