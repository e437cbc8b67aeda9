# builders.py - Construction d'un jeu non local étendu H à partir d'un jeu QC G
import logging

import numpy as np

from games.exceptions import InvalidDimension
from games.models import ExtendedGame
from games.validators import ensure_valid, validate_qc_game
from linalg.models import RegisterShape
from linalg.operators import kron, partial_trace

from .models import MaxEntangledState, ReducedOps, WeylBasis

logger = logging.getLogger(__name__)


def weyl_basis(d):
    """
    Opérateurs de Weyl discrets Shift^j Clock^k, sans phase globale,
    avec Shift|l> = |l+1 mod d> et Clock|l> = exp(2πil/d)|l>.
    """
    if d < 1:
        raise InvalidDimension(f"Dimension {d} invalide pour une base de Weyl")
    shift = np.roll(np.eye(d, dtype=np.complex128), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    ops = [
        np.linalg.matrix_power(shift, j) @ np.linalg.matrix_power(clock, k)
        for j in range(d)
        for k in range(d)
    ]
    return WeylBasis(d=d, ops=np.stack(ops))


def max_entangled(n):
    if n < 1:
        raise InvalidDimension(f"Dimension {n} invalide pour un état maximalement intriqué")
    vector = np.zeros(n * n, dtype=np.complex128)
    vector[:: n + 1] = 1.0 / np.sqrt(n)
    return MaxEntangledState(n=n, vector=vector)


def weyl_twirl(matrix, basis):
    """(1/d²) Σ_x U_x M U_x*, égal à (Tr M / d) I pour une base complète."""
    ops = basis.ops
    return np.einsum("xij,jk,xlk->il", ops, matrix, ops.conj()) / len(ops)


def reduce_qc(game):
    ensure_valid(validate_qc_game(game))
    n, s, m = game.dims
    shape = RegisterShape((n, s, m))
    xi = partial_trace(game.rho, shape, keep=(0, 2))
    count_a, count_b = game.answer_sets
    xi_ab = np.empty((count_a, count_b, n * m, n * m), dtype=np.complex128)
    for a in range(count_a):
        for b in range(count_b):
            lifted = kron(np.eye(n), game.win_op(a, b), np.eye(m))
            xi_ab[a, b] = partial_trace(lifted @ game.rho, shape, keep=(0, 2))
    return ReducedOps(xi=xi, xi_ab=xi_ab)


def build_enlg(game):
    """
    H : X = {0..n²-1}, Y = {0..m²-1}, π uniforme, R = (X, Y) et
    P_{a,b,x,y} = I - (U_x ⊗ V_y)(ξ^T - ξ_{a,b}^T)(U_x ⊗ V_y)*.
    """
    reduced = reduce_qc(game)
    n, m = game.n, game.m
    alice_basis, bob_basis = weyl_basis(n), weyl_basis(m)
    # (ξ - ξ_{a,b})^T pour chaque (a, b)
    gap = np.swapaxes(reduced.xi[None, None] - reduced.xi_ab, -1, -2)

    count_a, count_b = game.answer_sets
    ref_dim = n * m
    identity = np.eye(ref_dim)
    ref_ops = np.empty(
        (count_a, count_b, n * n, m * m, ref_dim, ref_dim), dtype=np.complex128
    )
    for x, u in enumerate(alice_basis.ops):
        for y, v in enumerate(bob_basis.ops):
            unitary = kron(u, v)
            ref_ops[:, :, x, y] = identity - unitary @ gap @ unitary.conj().T

    logger.info(
        "Jeu étendu construit : n=%d, m=%d, |X|=%d, |Y|=%d, dim R=%d",
        n, m, n * n, m * m, ref_dim,
    )
    return ExtendedGame(
        pi=np.full((n * n, m * m), 1.0 / (n * n * m * m)),
        ref_dim=ref_dim,
        ref_ops=ref_ops,
        name=f"H({game.name})" if game.name else "H",
        description="Jeu non local étendu construit à partir d'un jeu QC",
    )
