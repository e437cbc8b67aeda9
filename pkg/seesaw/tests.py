import numpy as np
from django.core.exceptions import ImproperlyConfigured
from django.test import SimpleTestCase, override_settings, tag

from construction.builders import build_enlg
from construction.catalog import build_rv_game, chsh_game, embed_nonlocal_game
from games.evaluation import enlg_win_prob, payoff_operator, qc_win_prob
from games.exceptions import UnsupportedAnswerAlphabet
from games.models import ENLGStrategy, QCGame
from games.sampling import (
    make_rng,
    random_density,
    random_enlg_strategy,
    random_povm,
    random_pure_state,
    random_qc_game,
    random_qc_strategy,
)
from games.validators import validate_qc_strategy
from linalg.exceptions import NotHermitian
from linalg.operators import hermiticity_residual, projector

from .models import SeeSawConfig
from .optimizer import embed_strategy, seesaw_enlg, seesaw_qc, sweep_enlg, sweep_qc
from .relations import value_relation_check
from .updates import helstrom_update, measurement_update, state_update_enlg, top_state


def _config(dims, restarts=4, max_rounds=200, seed=0, **extra):
    return SeeSawConfig(ancilla_dims=dims, restarts=restarts, max_rounds=max_rounds, seed=seed, **extra)


def _constant_qc_game(value, rng):
    return QCGame(
        rho=random_density(8, rng),
        dims=(2, 2, 2),
        win_ops=np.broadcast_to(value * np.eye(2), (2, 2, 2, 2)),
    )


def _random_hermitian(size, rng):
    matrix = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    return (matrix + matrix.conj().T) / 2


class ConfigTests(SimpleTestCase):
    def test_rejects_invalid_values(self):
        with self.assertRaises(ImproperlyConfigured):
            SeeSawConfig(restarts=0)
        with self.assertRaises(ImproperlyConfigured):
            SeeSawConfig(improve_tol=0.0)
        with self.assertRaises(ImproperlyConfigured):
            SeeSawConfig(ancilla_dims=(0, 1))

    @override_settings(SEESAW={"RESTARTS": 7, "SEED": 3})
    def test_from_settings_with_overrides(self):
        config = SeeSawConfig.from_settings(ancilla_dims=(2, 2), seed=None, max_rounds=10)
        self.assertEqual(config.restarts, 7)
        self.assertEqual(config.seed, 3)
        self.assertEqual(config.max_rounds, 10)
        self.assertEqual(config.total_dim, 4)


# =============================================================================
# MISES À JOUR
# =============================================================================


class HelstromTests(SimpleTestCase):
    def test_diagonal_separation(self):
        first, second = helstrom_update(np.diag([1.0, -1.0]))
        np.testing.assert_allclose(first, np.diag([1.0, 0.0]), atol=1e-14)
        np.testing.assert_allclose(second, np.diag([0.0, 1.0]), atol=1e-14)

    def test_zero_goes_to_first_outcome(self):
        first, second = helstrom_update(np.zeros((3, 3)))
        np.testing.assert_array_equal(first, np.eye(3))
        np.testing.assert_array_equal(second, np.zeros((3, 3)))

    def test_outputs_are_exactly_hermitian(self):
        rng = make_rng(5)
        for size in (2, 5, 8):
            for element in helstrom_update(_random_hermitian(size, rng)):
                np.testing.assert_array_equal(element, element.conj().T)
                self.assertEqual(hermiticity_residual(element), 0.0)

    def test_rejects_non_hermitian(self):
        with self.assertRaises(NotHermitian):
            helstrom_update(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_beats_random_binary_measurements(self):
        rng = make_rng(1)
        r0, r1 = _random_hermitian(3, rng), _random_hermitian(3, rng)
        first, second = helstrom_update(r0 - r1)
        optimum = np.trace(first @ r0 + second @ r1).real
        for _ in range(1000):
            candidate = random_povm(3, 2, rng)
            value = np.trace(candidate[0] @ r0 + candidate[1] @ r1).real
            self.assertLessEqual(value, optimum + 1e-10)

    def test_single_outcome(self):
        update = measurement_update(np.ones((1, 2, 2)))
        np.testing.assert_array_equal(update, np.eye(2)[None])


class StateUpdateTests(SimpleTestCase):
    def test_diagonal_argmax(self):
        state, value = top_state(np.diag([0.2, 0.9, 0.5]))
        self.assertAlmostEqual(value, 0.9)
        np.testing.assert_allclose(abs(state), np.diag([0.0, 1.0, 0.0]), atol=1e-14)

    def test_trivial_referee(self):
        game = embed_nonlocal_game(np.full((2, 2), 0.25), lambda a, b, x, y: True)
        rng = make_rng(2)
        strategy = random_enlg_strategy(game, (2, 2), rng)
        _, value = state_update_enlg(game, strategy.alice_povms, strategy.bob_povms)
        self.assertAlmostEqual(value, 1.0, delta=1e-12)

    def test_dominates_random_pure_states(self):
        rng = make_rng(3)
        game = build_enlg(random_qc_game(2, 2, 2, rng))
        strategy = random_enlg_strategy(game, (1, 1), rng)
        state, value = state_update_enlg(game, strategy.alice_povms, strategy.bob_povms)
        payoff = payoff_operator(game, strategy.alice_povms, strategy.bob_povms)
        self.assertAlmostEqual(np.trace(payoff @ state).real, value, delta=1e-10)
        for _ in range(2000):
            sample = projector(random_pure_state(4, rng))
            self.assertLessEqual(np.trace(payoff @ sample).real, value + 1e-12)


# =============================================================================
# OPTIMISATION ALTERNÉE
# =============================================================================


class ExtendedSeeSawTests(SimpleTestCase):
    def test_always_win(self):
        game = embed_nonlocal_game(np.full((2, 2), 0.25), lambda a, b, x, y: True)
        report = seesaw_enlg(game, _config((2, 2), restarts=2))
        self.assertAlmostEqual(report.best_value, 1.0, delta=1e-12)
        self.assertEqual(report.rounds_used, [1, 1])

    def test_chsh_single_dimension_is_classical(self):
        report = seesaw_enlg(chsh_game(), _config((1, 1)))
        self.assertLessEqual(report.best_value, 0.75 + 1e-9)
        self.assertGreaterEqual(report.best_value, 0.75 - 1e-9)

    def test_report_invariants(self):
        rng = make_rng(4)
        game = build_enlg(random_qc_game(2, 2, 2, rng))
        report = seesaw_enlg(game, _config((1, 2), restarts=3, seed=11))
        self.assertTrue(report.monotone_ok)
        self.assertEqual(report.seed, 11)
        self.assertEqual(report.restarts_used, 3)
        self.assertEqual(report.best_value, max(report.per_restart_values))
        self.assertAlmostEqual(enlg_win_prob(game, report.best_strategy).raw, report.best_value, delta=1e-9)
        for history in report.histories:
            self.assertTrue(all(b >= a - 1e-10 for a, b in zip(history, history[1:])))
        # plafond de perte 1/(nm)
        self.assertGreaterEqual(report.best_value, 0.75 - 1e-9)

    def test_same_seed_same_report(self):
        game = chsh_game()
        first = seesaw_enlg(game, _config((2, 2), restarts=3, seed=5))
        second = seesaw_enlg(game, _config((2, 2), restarts=3, seed=5))
        self.assertEqual(first.per_restart_values, second.per_restart_values)
        self.assertEqual(first.rounds_used, second.rounds_used)

    def test_parallel_restarts_match_serial(self):
        game = chsh_game()
        serial = seesaw_enlg(game, _config((2, 2), restarts=4, seed=9))
        parallel = seesaw_enlg(game, _config((2, 2), restarts=4, seed=9, workers=2))
        self.assertEqual(serial.per_restart_values, parallel.per_restart_values)

    def test_rejects_large_alphabets(self):
        game = embed_nonlocal_game(np.full((2, 2), 0.25), lambda a, b, x, y: a == b, answers=(3, 2))
        with self.assertRaises(UnsupportedAnswerAlphabet):
            seesaw_enlg(game, _config((1, 1)))

    def test_helstrom_optimality_of_reported_strategy(self):
        rng = make_rng(6)
        game = chsh_game()
        report = seesaw_enlg(game, _config((2, 2), restarts=3, max_rounds=500, improve_tol=1e-13))
        best = report.best_strategy
        for index in range(1000):
            alice, bob = np.array(best.alice_povms), np.array(best.bob_povms)
            if index % 2:
                bob[int(rng.integers(2))] = random_povm(2, 2, rng)
            else:
                alice[int(rng.integers(2))] = random_povm(2, 2, rng)
            candidate = ENLGStrategy(best.sigma, best.dims, alice, bob)
            self.assertLessEqual(enlg_win_prob(game, candidate).raw, report.best_value + 1e-8)

    def test_dominates_deterministic_assignments(self):
        rng = make_rng(7)
        game = build_enlg(random_qc_game(2, 2, 2, rng))
        report = seesaw_enlg(game, _config((1, 1), restarts=10))
        count_x, count_y = game.question_sets
        for _ in range(300):
            answers_a = rng.integers(2, size=count_x)
            answers_b = rng.integers(2, size=count_y)
            operator = sum(
                game.pi[x, y] * game.ref_op(answers_a[x], answers_b[y], x, y)
                for x in range(count_x)
                for y in range(count_y)
            )
            baseline = np.linalg.eigvalsh(operator).max()
            self.assertGreaterEqual(report.best_value, baseline - 1e-8)

    @tag("slow")
    def test_chsh_reaches_quantum_value(self):
        report = seesaw_enlg(chsh_game(), _config((2, 2), restarts=20, max_rounds=500))
        self.assertGreaterEqual(report.best_value, 0.85345)
        self.assertLessEqual(report.best_value, np.cos(np.pi / 8) ** 2 + 1e-9)

    @tag("slow")
    def test_rv_game_grows_with_dimension(self):
        rows = sweep_enlg(build_rv_game(), [(1, 1), (2, 2), (3, 3)], _config((1, 1), restarts=20, max_rounds=500))
        values = [row.lower_bound for row in rows]
        self.assertTrue(all(b > a for a, b in zip(values, values[1:])), values)
        self.assertTrue(all(value < 1 - 1e-4 for value in values), values)
        self.assertGreaterEqual(values[2] - values[0], 1e-3)


class QCSeeSawTests(SimpleTestCase):
    def test_always_win_and_always_lose(self):
        rng = make_rng(8)
        win = seesaw_qc(_constant_qc_game(1.0, rng), _config((1, 1), restarts=2))
        lose = seesaw_qc(_constant_qc_game(0.0, rng), _config((1, 1), restarts=2))
        self.assertAlmostEqual(win.best_value, 1.0, delta=1e-12)
        self.assertAlmostEqual(lose.best_value, 0.0, delta=1e-12)

    def test_report_is_certified(self):
        rng = make_rng(9)
        game = random_qc_game(2, 2, 2, rng)
        report = seesaw_qc(game, _config((2, 1), restarts=3))
        self.assertTrue(report.monotone_ok)
        self.assertAlmostEqual(qc_win_prob(game, report.best_strategy).raw, report.best_value, delta=1e-9)
        self.assertTrue(validate_qc_strategy(report.best_strategy, game).ok)

    def test_sweep_is_non_decreasing(self):
        rng = make_rng(10)
        game = random_qc_game(2, 2, 2, rng)
        rows = sweep_qc(game, [(1, 1), (1, 2), (2, 2)], _config((1, 1), restarts=3))
        values = [row.lower_bound for row in rows]
        self.assertTrue(all(b >= a - 1e-8 for a, b in zip(values, values[1:])), values)
        self.assertEqual([row.total_dim for row in rows], [1, 2, 4])
        self.assertTrue(all(row.restarts_used == 3 for row in rows))


class EmbeddingTests(SimpleTestCase):
    def test_extended_strategy_keeps_value(self):
        rng = make_rng(11)
        game = build_enlg(random_qc_game(2, 2, 2, rng))
        strategy = random_enlg_strategy(game, (1, 2), rng)
        padded = embed_strategy(strategy, (3, 2))
        self.assertEqual(padded.dims, (3, 4, 2))
        self.assertAlmostEqual(enlg_win_prob(game, padded).raw, enlg_win_prob(game, strategy).raw, delta=1e-12)
        np.testing.assert_allclose(padded.alice_povms.sum(axis=1), np.broadcast_to(np.eye(3), (game.question_sets[0], 3, 3)), atol=1e-12)

    def test_qc_strategy_keeps_value(self):
        rng = make_rng(12)
        game = random_qc_game(2, 2, 3, rng)
        strategy = random_qc_strategy(game, (1, 1), rng)
        padded = embed_strategy(strategy, (2, 3))
        self.assertEqual(padded.dims, (2, 3))
        self.assertEqual(padded.question_dims, (2, 3))
        self.assertAlmostEqual(qc_win_prob(game, padded).raw, qc_win_prob(game, strategy).raw, delta=1e-12)


# =============================================================================
# RELATION ENTRE LES VALEURS
# =============================================================================


class ValueRelationTests(SimpleTestCase):
    def test_always_win(self):
        report = value_relation_check(_constant_qc_game(1.0, make_rng(13)), _config((1, 1), restarts=2))
        self.assertAlmostEqual(report.v_g, 1.0, delta=1e-12)
        self.assertAlmostEqual(report.v_h, 1.0, delta=1e-12)
        self.assertAlmostEqual(report.forward_bound, 1.0, delta=1e-12)
        self.assertTrue(report.holds)

    def test_always_lose(self):
        report = value_relation_check(_constant_qc_game(0.0, make_rng(14)), _config((1, 1), restarts=2))
        self.assertAlmostEqual(report.v_g, 0.0, delta=1e-12)
        self.assertAlmostEqual(report.adapted_value, 0.75, delta=1e-9)
        self.assertGreaterEqual(report.v_h, 0.75 - 1e-9)

    def test_random_game_is_certified(self):
        rng = make_rng(15)
        report = value_relation_check(random_qc_game(2, 2, 2, rng), _config((1, 2), restarts=2, max_rounds=50))
        self.assertTrue(report.holds)
        self.assertGreaterEqual(report.adapted_value, report.forward_bound - 1e-9)
        self.assertAlmostEqual(report.backward_value, report.backward_bound, delta=1e-9)

    @tag("slow")
    def test_relation_on_random_games(self):
        rng = make_rng(2048)
        for index in range(20):
            game = random_qc_game(2, 2, 2, rng)
            report = value_relation_check(game, _config((1, 2), restarts=20, seed=index))
            self.assertGreaterEqual(report.certified_v_h, 1 - (1 - report.v_g) / 4 - 1e-8)
