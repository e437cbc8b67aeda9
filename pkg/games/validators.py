# validators.py - Vérification des invariants des jeux et des stratégies
import numpy as np

from linalg.models import get_policy
from linalg.operators import eigenvalue_bounds, hermiticity_residual

from .exceptions import DimensionMismatch, ValidationFailed
from .models import ValidationReport


def _check_hermitian(report, code, matrix, index, policy):
    residual = hermiticity_residual(matrix)
    if residual > policy.hermitian_tol:
        report.add(f"{code}.hermitian", "Opérateur non hermitien", index, residual)
        return False
    return True


def _check_density(report, code, matrix, policy):
    trace = np.trace(matrix)
    residual = abs(trace - 1.0)
    if residual > policy.trace_tol:
        report.add(f"{code}.trace", f"Trace {trace.real:.12g} différente de 1", (), residual)
    if not _check_hermitian(report, code, matrix, (), policy):
        return
    lowest, _ = eigenvalue_bounds(matrix, policy)
    if lowest < -policy.psd_tol:
        report.add(
            f"{code}.psd", f"Valeur propre négative {lowest:.6g}", (), -lowest
        )


def _check_effect(report, code, matrix, index, policy):
    """0 <= M <= I à psd_tol près."""
    if not _check_hermitian(report, code, matrix, index, policy):
        return
    lowest, highest = eigenvalue_bounds(matrix, policy)
    if lowest < -policy.psd_tol or highest > 1.0 + policy.psd_tol:
        residual = max(-lowest, highest - 1.0)
        report.add(
            f"{code}.bounds",
            f"Spectre [{lowest:.6g}, {highest:.6g}] hors de [0, 1]",
            index,
            residual,
        )


def _check_povm(report, code, elements, index, policy):
    total = np.zeros_like(elements[0])
    for outcome, element in enumerate(elements):
        total = total + element
        if not _check_hermitian(report, code, element, (*index, outcome), policy):
            continue
        lowest, _ = eigenvalue_bounds(element, policy)
        if lowest < -policy.psd_tol:
            report.add(
                f"{code}.psd",
                f"Élément de mesure avec valeur propre {lowest:.6g}",
                (*index, outcome),
                -lowest,
            )
    residual = float(np.linalg.norm(total - np.eye(total.shape[0])))
    if residual > policy.povm_tol:
        report.add(f"{code}.completeness", "Les éléments ne somment pas à I", index, residual)


# =============================================================================
# JEUX
# =============================================================================


def validate_qc_game(game, policy=None):
    policy = policy or get_policy()
    report = ValidationReport("qc-game")
    _check_density(report, "rho", game.rho, policy)
    count_a, count_b = game.answer_sets
    if count_a < 1 or count_b < 1:
        report.add("answers.empty", "Ensemble de réponses vide")
    for a in range(count_a):
        for b in range(count_b):
            _check_effect(report, "win_op", game.win_op(a, b), (a, b), policy)
    return report


def validate_enlg(game, policy=None):
    policy = policy or get_policy()
    report = ValidationReport("enlg")
    total = float(np.sum(game.pi))
    if abs(total - 1.0) > policy.trace_tol:
        report.add("pi.sum", f"pi somme à {total:.12g}", (), abs(total - 1.0))
    lowest = float(np.min(game.pi))
    if lowest < 0.0:
        x, y = np.unravel_index(int(np.argmin(game.pi)), game.pi.shape)
        report.add("pi.negative", "Probabilité négative", (int(x), int(y)), -lowest)

    count_a, count_b = game.answer_sets
    count_x, count_y = game.question_sets
    for a in range(count_a):
        for b in range(count_b):
            for x in range(count_x):
                for y in range(count_y):
                    _check_effect(report, "ref_op", game.ref_op(a, b, x, y), (a, b, x, y), policy)
    return report


def is_xor_game(game, tol=1e-12):
    """Réponses binaires et Q_{a,b} ne dépendant que de a xor b."""
    if tuple(game.answer_sets) != (2, 2):
        return False
    ops = game.win_ops
    return bool(
        np.linalg.norm(ops[0, 0] - ops[1, 1]) <= tol
        and np.linalg.norm(ops[0, 1] - ops[1, 0]) <= tol
    )


# =============================================================================
# STRATÉGIES
# =============================================================================


def validate_qc_strategy(strategy, game=None, policy=None):
    policy = policy or get_policy()
    report = ValidationReport("qc-strategy")
    _check_density(report, "sigma", strategy.sigma, policy)
    _check_povm(report, "alice_povm", strategy.alice_povm, (), policy)
    _check_povm(report, "bob_povm", strategy.bob_povm, (), policy)
    if game is not None:
        try:
            check_qc_compatible(game, strategy)
        except DimensionMismatch as exc:
            report.add("dimension", str(exc))
    return report


def validate_enlg_strategy(strategy, game=None, policy=None):
    policy = policy or get_policy()
    report = ValidationReport("enlg-strategy")
    _check_density(report, "sigma", strategy.sigma, policy)
    for x, povm in enumerate(strategy.alice_povms):
        _check_povm(report, "alice_povms", povm, (x,), policy)
    for y, povm in enumerate(strategy.bob_povms):
        _check_povm(report, "bob_povms", povm, (y,), policy)
    if game is not None:
        try:
            check_enlg_compatible(game, strategy)
        except DimensionMismatch as exc:
            report.add("dimension", str(exc))
    return report


def ensure_valid(report):
    if len(report):
        raise ValidationFailed(report)
    return report


# =============================================================================
# COMPATIBILITÉ DES DIMENSIONS
# =============================================================================


def check_qc_compatible(game, strategy):
    expected = [game.n, game.m, *game.answer_sets]
    received = [
        *strategy.question_dims,
        strategy.alice_povm.shape[0],
        strategy.bob_povm.shape[0],
    ]
    if expected != received:
        raise DimensionMismatch(
            f"Stratégie (n, m, |A|, |B|) = {received}, jeu = {expected}",
            expected=expected,
            received=received,
        )


def check_enlg_compatible(game, strategy):
    expected = [game.ref_dim, *game.question_sets, *game.answer_sets]
    received = [
        strategy.dims[1],
        strategy.alice_povms.shape[0],
        strategy.bob_povms.shape[0],
        strategy.alice_povms.shape[1],
        strategy.bob_povms.shape[1],
    ]
    if expected != received:
        raise DimensionMismatch(
            f"Stratégie (dim R, |X|, |Y|, |A|, |B|) = {received}, jeu = {expected}",
            expected=expected,
            received=received,
        )
