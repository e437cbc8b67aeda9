# updates.py - Mises à jour optimales d'un joueur (Helstrom) ou de l'état (vecteur propre dominant)
import numpy as np

from games.evaluation import QC_REORDER, payoff_operator, qc_payoff_operator
from linalg.models import RegisterShape
from linalg.operators import (
    hermitian_eig,
    hermitian_part,
    inverse_permutation,
    kron,
    partial_trace,
    permute_registers,
    projector,
    top_eigenvector,
)


def helstrom_update(r_diff, policy=None):
    """
    Mesure binaire optimale (E0, E1) pour R_diff = R0 - R1 : E0 projette sur
    les valeurs propres >= 0 (les valeurs nulles vont à l'issue 0), E1 = I - E0.
    """
    values, vectors = hermitian_eig(r_diff, policy)
    kept = vectors[:, values >= 0.0]
    first = hermitian_part(kept @ kept.conj().T)
    return np.stack([first, hermitian_part(np.eye(len(values)) - first)])


def measurement_update(environments, policy=None):
    """Mesure optimale pour 1 ou 2 issues, à partir des environnements R_a."""
    if len(environments) == 1:
        return np.eye(environments.shape[-1], dtype=np.complex128)[None]
    return helstrom_update(hermitian_part(environments[0] - environments[1]), policy)


def top_state(payoff, policy=None):
    """(|v><v|, valeur propre dominante) pour l'opérateur de gain."""
    value, vector = top_eigenvector(hermitian_part(payoff), policy)
    return projector(vector), value


# =============================================================================
# JEUX NON LOCAUX ÉTENDUS
# =============================================================================


def _sigma_tensor(sigma, dims):
    return sigma.reshape(*dims, *dims)


def alice_environments(game, bob_povms, sigma, dims):
    """R[x, a] sur U, avec gain = Σ_x Σ_a Tr(A^x_a R[x, a])."""
    return np.einsum(
        "xy,abxykl,ybmn,jlnikm->xaji",
        game.pi,
        game.ref_ops,
        bob_povms,
        _sigma_tensor(sigma, dims),
        optimize=True,
    )


def bob_environments(game, alice_povms, sigma, dims):
    """R[y, b] sur V, avec gain = Σ_y Σ_b Tr(B^y_b R[y, b])."""
    return np.einsum(
        "xy,xaij,abxykl,jlnikm->ybnm",
        game.pi,
        alice_povms,
        game.ref_ops,
        _sigma_tensor(sigma, dims),
        optimize=True,
    )


def state_update_enlg(game, alice_povms, bob_povms, policy=None):
    """État optimal à mesures fixées et valeur atteinte."""
    return top_state(payoff_operator(game, alice_povms, bob_povms), policy)


# =============================================================================
# JEUX QC
# =============================================================================


def qc_alice_environments(game, bob_povm, joint, dims):
    """
    R[a] sur U⊗X à partir de l'état joint sur (U, X, S, Y, V).
    `dims` = (dU * n, s, m * dV).
    """
    return np.einsum(
        "abkl,bmn,jlnikm->aji",
        game.win_ops,
        bob_povm,
        joint.reshape(*dims, *dims),
        optimize=True,
    )


def qc_bob_environments(game, alice_povm, joint, dims):
    return np.einsum(
        "aij,abkl,jlnikm->bnm",
        alice_povm,
        game.win_ops,
        joint.reshape(*dims, *dims),
        optimize=True,
    )


def qc_state_operator(game, alice_povm, bob_povm, ancilla_dims):
    """
    T_UV = Tr_XSY[(W* M W)(I_UV ⊗ rho)], avec gain = Tr(T_UV sigma).
    """
    du, dv = ancilla_dims
    n, s, m = game.dims
    payoff = qc_payoff_operator(game, alice_povm, bob_povm)
    reordered = permute_registers(
        payoff, RegisterShape((du, n, s, m, dv)), inverse_permutation(QC_REORDER)
    )
    weighted = reordered @ kron(np.eye(du * dv), game.rho)
    return partial_trace(weighted, RegisterShape((du, dv, n, s, m)), keep=(0, 1))


def state_update_qc(game, alice_povm, bob_povm, ancilla_dims, policy=None):
    return top_state(qc_state_operator(game, alice_povm, bob_povm, ancilla_dims), policy)
