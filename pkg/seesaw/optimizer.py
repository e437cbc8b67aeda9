# optimizer.py - Optimisation alternée (see-saw) : bornes inférieures certifiées sur ω*_N
import logging
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from games.evaluation import enlg_win_prob, qc_joint_state, qc_win_prob
from games.exceptions import CertificationFailed, UnsupportedAnswerAlphabet
from games.models import ENLGStrategy, QCStrategy
from games.sampling import random_projective_povm, spawn_rngs
from games.validators import (
    ensure_valid,
    validate_enlg,
    validate_enlg_strategy,
    validate_qc_game,
    validate_qc_strategy,
)
from linalg.models import get_policy
from linalg.operators import kron

from .models import CERTIFY_TOL, RestartResult, SeeSawReport, SweepRow
from .updates import (
    alice_environments,
    bob_environments,
    measurement_update,
    qc_alice_environments,
    qc_bob_environments,
    state_update_enlg,
    state_update_qc,
)

logger = logging.getLogger(__name__)


def _check_binary(answer_sets):
    if max(answer_sets) > 2:
        raise UnsupportedAnswerAlphabet(
            f"L'optimisation alternée exige au plus 2 réponses par joueur, reçu {tuple(answer_sets)}"
        )


# =============================================================================
# PROBLÈMES
# =============================================================================


class ExtendedProblem:
    """Jeu étendu H à dimensions d'ancilla fixées."""

    def __init__(self, game, ancilla_dims, policy=None):
        self.game = game
        self.policy = policy or get_policy()
        du, dv = ancilla_dims
        self.dims = (du, game.ref_dim, dv)

    def random_measurements(self, rng):
        du, _, dv = self.dims
        count_x, count_y = self.game.question_sets
        count_a, count_b = self.game.answer_sets
        alice = np.stack([random_projective_povm(du, count_a, rng) for _ in range(count_x)])
        bob = np.stack([random_projective_povm(dv, count_b, rng) for _ in range(count_y)])
        return alice, bob

    def update_alice(self, bob, sigma):
        environments = alice_environments(self.game, bob, sigma, self.dims)
        return np.stack([measurement_update(env, self.policy) for env in environments])

    def update_bob(self, alice, sigma):
        environments = bob_environments(self.game, alice, sigma, self.dims)
        return np.stack([measurement_update(env, self.policy) for env in environments])

    def update_state(self, alice, bob):
        return state_update_enlg(self.game, alice, bob, self.policy)

    def strategy(self, alice, bob, sigma):
        return ENLGStrategy(sigma=sigma, dims=self.dims, alice_povms=alice, bob_povms=bob)

    def unpack(self, strategy):
        return np.array(strategy.alice_povms), np.array(strategy.bob_povms), np.array(strategy.sigma)

    def evaluate(self, strategy):
        return enlg_win_prob(self.game, strategy).raw

    def validate(self, strategy):
        return validate_enlg_strategy(strategy, self.game, self.policy)


class QCProblem:
    """Jeu QC G à dimensions d'ancilla fixées."""

    def __init__(self, game, ancilla_dims, policy=None):
        self.game = game
        self.policy = policy or get_policy()
        self.ancilla_dims = tuple(ancilla_dims)
        du, dv = self.ancilla_dims
        self.joint_dims = (du * game.n, game.s, game.m * dv)

    def random_measurements(self, rng):
        du, dv = self.ancilla_dims
        count_a, count_b = self.game.answer_sets
        alice = random_projective_povm(du * self.game.n, count_a, rng)
        bob = random_projective_povm(self.game.m * dv, count_b, rng)
        return alice, bob

    def _joint(self, sigma):
        return qc_joint_state(self.game, sigma, self.ancilla_dims)

    def update_alice(self, bob, sigma):
        environments = qc_alice_environments(self.game, bob, self._joint(sigma), self.joint_dims)
        return measurement_update(environments, self.policy)

    def update_bob(self, alice, sigma):
        environments = qc_bob_environments(self.game, alice, self._joint(sigma), self.joint_dims)
        return measurement_update(environments, self.policy)

    def update_state(self, alice, bob):
        return state_update_qc(self.game, alice, bob, self.ancilla_dims, self.policy)

    def strategy(self, alice, bob, sigma):
        return QCStrategy(sigma=sigma, dims=self.ancilla_dims, alice_povm=alice, bob_povm=bob)

    def unpack(self, strategy):
        return np.array(strategy.alice_povm), np.array(strategy.bob_povm), np.array(strategy.sigma)

    def evaluate(self, strategy):
        return qc_win_prob(self.game, strategy).raw

    def validate(self, strategy):
        return validate_qc_strategy(strategy, self.game, self.policy)


# =============================================================================
# BOUCLE ALTERNÉE
# =============================================================================


def run_restart(problem, config, rng, initial=None):
    """
    Une relance : Alice, puis Bob, puis l'état, jusqu'à un gain < improve_tol
    ou max_rounds tours. Chaque valeur de l'historique est recalculée par le
    module des jeux.
    """
    if initial is None:
        alice, bob = problem.random_measurements(rng)
        sigma, internal = problem.update_state(alice, bob)
    else:
        alice, bob, sigma = problem.unpack(initial)
        internal = None

    strategy = problem.strategy(alice, bob, sigma)
    value = problem.evaluate(strategy)
    internal = value if internal is None else internal
    history = [value]
    best = (value, strategy, internal)

    rounds = 0
    while rounds < config.max_rounds:
        rounds += 1
        alice = problem.update_alice(bob, sigma)
        bob = problem.update_bob(alice, sigma)
        sigma, internal = problem.update_state(alice, bob)
        strategy = problem.strategy(alice, bob, sigma)
        value = problem.evaluate(strategy)
        history.append(value)
        logger.debug("Tour %d : %.15f", rounds, value)
        if value > best[0]:
            best = (value, strategy, internal)
        if value - history[-2] < config.improve_tol:
            break

    return RestartResult(
        value=best[0],
        strategy=best[1],
        history=tuple(history),
        internal_value=best[2],
        rounds=rounds,
    )


def _run(problem, config, initial=None):
    du, dv = config.ancilla_dims
    rngs = spawn_rngs((config.seed, du, dv), config.restarts)
    starts = [initial] + [None] * (config.restarts - 1)

    def job(index):
        return run_restart(problem, config, rngs[index], starts[index])

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as executor:
            results = list(executor.map(job, range(config.restarts)))
    else:
        results = [job(index) for index in range(config.restarts)]

    best = max(results, key=lambda result: result.value)
    ensure_valid(problem.validate(best.strategy))
    certified = problem.evaluate(best.strategy)
    if abs(certified - best.internal_value) > CERTIFY_TOL:
        raise CertificationFailed(
            f"Valeur interne {best.internal_value!r} et valeur recalculée {certified!r} divergent"
        )

    monotone_ok = all(result.monotone for result in results)
    if not monotone_ok:
        logger.warning("Progression non monotone détectée (dims %s)", config.ancilla_dims)
    logger.info(
        "See-saw dims %s : meilleure valeur %.12f sur %d relances (graine %d)",
        config.ancilla_dims, certified, config.restarts, config.seed,
    )
    return SeeSawReport(
        best_value=certified,
        best_strategy=best.strategy,
        per_restart_values=[result.value for result in results],
        rounds_used=[result.rounds for result in results],
        monotone_ok=monotone_ok,
        seed=config.seed,
        ancilla_dims=config.ancilla_dims,
        histories=[result.history for result in results],
    )


def seesaw_enlg(game, config, initial=None):
    """
    Borne inférieure sur ω*_N(H) pour N = dim U * dim V. `initial` remplace
    le tirage aléatoire de la première relance.
    """
    _check_binary(game.answer_sets)
    ensure_valid(validate_enlg(game))
    return _run(ExtendedProblem(game, config.ancilla_dims), config, initial)


def seesaw_qc(game, config, initial=None):
    _check_binary(game.answer_sets)
    ensure_valid(validate_qc_game(game))
    return _run(QCProblem(game, config.ancilla_dims), config, initial)


# =============================================================================
# PLONGEMENT ET BALAYAGE EN DIMENSION
# =============================================================================


def _isometry(small, large):
    return np.eye(large, small, dtype=np.complex128)


def _pad_povms(povms, isometry):
    """J A J* pour chaque élément, et I - J J* ajouté à l'issue 0."""
    padded = isometry @ povms @ isometry.conj().T
    padded[..., 0, :, :] += np.eye(isometry.shape[0]) - isometry @ isometry.conj().T
    return padded


def embed_strategy(strategy, ancilla_dims):
    """
    Somme directe : plonge une stratégie dans des ancillas plus grandes
    sans changer sa probabilité de gain.
    """
    du, dv = ancilla_dims
    if isinstance(strategy, ENLGStrategy):
        old_u, r, old_v = strategy.dims
        alice_iso, bob_iso = _isometry(old_u, du), _isometry(old_v, dv)
        state_iso = kron(alice_iso, np.eye(r), bob_iso)
        return ENLGStrategy(
            sigma=state_iso @ strategy.sigma @ state_iso.conj().T,
            dims=(du, r, dv),
            alice_povms=_pad_povms(strategy.alice_povms, alice_iso),
            bob_povms=_pad_povms(strategy.bob_povms, bob_iso),
        )

    old_u, old_v = strategy.dims
    n, m = strategy.question_dims
    alice_iso, bob_iso = _isometry(old_u, du), _isometry(old_v, dv)
    state_iso = kron(alice_iso, bob_iso)
    return QCStrategy(
        sigma=state_iso @ strategy.sigma @ state_iso.conj().T,
        dims=(du, dv),
        alice_povm=_pad_povms(strategy.alice_povm, kron(alice_iso, np.eye(n))),
        bob_povm=_pad_povms(strategy.bob_povm, kron(np.eye(m), bob_iso)),
    )


def _sweep(runner, game, dims_list, config):
    rows = []
    previous = None
    for dims in dims_list:
        dims = tuple(int(d) for d in dims)
        started = time.perf_counter()
        initial = None
        if previous is not None:
            old = previous.ancilla_dims
            if dims[0] >= old[0] and dims[1] >= old[1]:
                initial = embed_strategy(previous.best_strategy, dims)
            else:
                logger.info("Pas de démarrage à chaud de %s vers %s", old, dims)
        report = runner(game, config.with_dims(dims), initial)
        rows.append(
            SweepRow(
                ancilla_dims=dims,
                lower_bound=report.best_value,
                restarts_used=report.restarts_used,
                rounds=report.total_rounds,
                wall_time_seconds=time.perf_counter() - started,
                report=report,
            )
        )
        previous = report
    return rows


def sweep_enlg(game, dims_list, config):
    return _sweep(seesaw_enlg, game, dims_list, config)


def sweep_qc(game, dims_list, config):
    return _sweep(seesaw_qc, game, dims_list, config)
