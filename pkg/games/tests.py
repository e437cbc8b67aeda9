import numpy as np
from django.test import SimpleTestCase

from linalg.models import get_policy
from linalg.operators import hermiticity_residual, kron

from .evaluation import as_probability, enlg_win_prob, payoff_operator, qc_joint_state, qc_win_prob
from .exceptions import DimensionMismatch, NonRealProbability, ValidationFailed
from .models import ENLGStrategy, ExtendedGame, QCGame, QCStrategy, WinProbability
from .sampling import (
    make_rng,
    random_density,
    random_enlg_strategy,
    random_povm,
    random_projective_povm,
    random_qc_game,
    random_qc_strategy,
    spawn_rngs,
)
from .validators import (
    ensure_valid,
    is_xor_game,
    validate_enlg,
    validate_enlg_strategy,
    validate_qc_game,
    validate_qc_strategy,
)


def _permutation_unitary(dims, perm):
    """Matrice de permutation explicite des registres, construite base par base."""
    total = int(np.prod(dims))
    new_dims = [dims[p] for p in perm]
    unitary = np.zeros((total, total))
    for index in range(total):
        digits = np.unravel_index(index, dims)
        target = np.ravel_multi_index([digits[p] for p in perm], new_dims)
        unitary[target, index] = 1.0
    return unitary


def _born_sample_win_rate(game, strategy, shots, rng):
    """Simulation par tirages de Born : (a, b) puis issue de l'arbitre."""
    joint = qc_joint_state(game, strategy.sigma, strategy.dims)
    identity = np.eye(game.s)
    outcomes, weights = [], []
    for a, effect_a in enumerate(strategy.alice_povm):
        for b, effect_b in enumerate(strategy.bob_povm):
            for won, referee in ((1, game.win_op(a, b)), (0, identity - game.win_op(a, b))):
                weight = np.trace(kron(effect_a, referee, effect_b) @ joint).real
                outcomes.append(won)
                weights.append(max(weight, 0.0))
    weights = np.array(weights) / np.sum(weights)
    draws = rng.choice(len(outcomes), size=shots, p=weights)
    return float(np.mean(np.array(outcomes)[draws]))


def _constant_qc_game(value, rng, dims=(2, 2, 2)):
    n, s, m = dims
    return QCGame(
        rho=random_density(n * s * m, rng),
        dims=dims,
        win_ops=np.broadcast_to(value * np.eye(s), (2, 2, s, s)),
    )


# =============================================================================
# MODÈLES
# =============================================================================


class ModelTests(SimpleTestCase):
    def test_qc_game_rejects_wrong_state_size(self):
        with self.assertRaises(DimensionMismatch):
            QCGame(rho=np.eye(7) / 7, dims=(2, 2, 2), win_ops=np.zeros((2, 2, 2, 2)))

    def test_extended_game_rejects_wrong_referee_shape(self):
        with self.assertRaises(DimensionMismatch):
            ExtendedGame(pi=np.full((2, 2), 0.25), ref_dim=2, ref_ops=np.zeros((2, 2, 2, 2, 3, 3)))

    def test_models_are_read_only(self):
        game = _constant_qc_game(1.0, make_rng(0))
        with self.assertRaises(ValueError):
            game.rho[0, 0] = 2.0

    def test_win_probability_clamping(self):
        probability = WinProbability(1.0 + 5e-10)
        self.assertEqual(probability.value, 1.0)
        self.assertAlmostEqual(probability.loss, -5e-10)
        self.assertEqual(float(WinProbability(-1e-12)), 0.0)

    def test_non_real_probability(self):
        with self.assertRaises(NonRealProbability):
            as_probability(0.5 + 1e-6j)
        self.assertAlmostEqual(as_probability(0.5 + 1e-12j).raw, 0.5)


# =============================================================================
# VALIDATION
# =============================================================================


class ValidationTests(SimpleTestCase):
    def test_random_game_is_valid(self):
        report = validate_qc_game(random_qc_game(2, 3, 2, make_rng(1)))
        self.assertTrue(report.ok, str(report))

    def test_non_psd_state_is_reported(self):
        rho = np.diag([1.2, -0.2, 0, 0, 0, 0, 0, 0])
        game = QCGame(rho=rho, dims=(2, 2, 2), win_ops=np.zeros((2, 2, 2, 2)))
        report = validate_qc_game(game)
        self.assertEqual(report.codes(), ["rho.psd"])
        self.assertAlmostEqual(report.violations[0].residual, 0.2)
        with self.assertRaises(ValidationFailed):
            ensure_valid(report)

    def test_trace_and_effect_violations(self):
        win_ops = np.zeros((2, 2, 2, 2))
        win_ops[1, 0] = 1.5 * np.eye(2)
        game = QCGame(rho=np.eye(8) / 4, dims=(2, 2, 2), win_ops=win_ops)
        report = validate_qc_game(game)
        self.assertIn("rho.trace", report.codes())
        self.assertIn("win_op.bounds", report.codes())
        bounds = [v for v in report.violations if v.code == "win_op.bounds"]
        self.assertEqual(bounds[0].index, (1, 0))

    def test_non_hermitian_state(self):
        rho = np.eye(8, dtype=complex) / 8
        rho[0, 1] = 0.1j
        game = QCGame(rho=rho, dims=(2, 2, 2), win_ops=np.zeros((2, 2, 2, 2)))
        self.assertIn("rho.hermitian", validate_qc_game(game).codes())

    def test_enlg_distribution_checks(self):
        pi = np.array([[0.75, -0.25], [0.25, 0.25]])
        game = ExtendedGame(pi=pi, ref_dim=1, ref_ops=np.ones((2, 2, 2, 2, 1, 1)))
        report = validate_enlg(game)
        self.assertEqual(report.codes(), ["pi.negative"])
        self.assertEqual(report.violations[0].index, (0, 1))

    def test_strategy_validation(self):
        rng = make_rng(2)
        game = random_qc_game(2, 2, 2, rng)
        strategy = random_qc_strategy(game, (2, 2), rng)
        self.assertTrue(validate_qc_strategy(strategy, game).ok)

        incomplete = QCStrategy(
            sigma=strategy.sigma,
            dims=(2, 2),
            alice_povm=strategy.alice_povm[:1],
            bob_povm=strategy.bob_povm,
        )
        report = validate_qc_strategy(incomplete, game)
        self.assertIn("alice_povm.completeness", report.codes())
        self.assertIn("dimension", report.codes())

    def test_near_zero_effect_with_rounding_noise(self):
        rng = make_rng(21)
        game = random_qc_game(2, 2, 2, rng)
        strategy = random_qc_strategy(game, (2, 2), rng)
        # bruit anti-hermitien d'arrondi sur un effet presque nul
        noise = 1e-17j * np.ones((4, 4))
        noisy = QCStrategy(
            sigma=strategy.sigma,
            dims=(2, 2),
            alice_povm=strategy.alice_povm,
            bob_povm=np.stack([np.eye(4) - noise, noise]),
        )
        report = validate_qc_strategy(noisy, game)
        self.assertTrue(report.ok, str(report))

    def test_enlg_strategy_validation(self):
        rng = make_rng(3)
        game = ExtendedGame(pi=np.full((2, 2), 0.25), ref_dim=2, ref_ops=np.ones((2, 2, 2, 2, 2, 2)))
        strategy = random_enlg_strategy(game, (2, 3), rng)
        self.assertTrue(validate_enlg_strategy(strategy, game).ok)
        doubled = ENLGStrategy(
            sigma=2 * strategy.sigma,
            dims=strategy.dims,
            alice_povms=strategy.alice_povms,
            bob_povms=strategy.bob_povms,
        )
        self.assertEqual(validate_enlg_strategy(doubled).codes(), ["sigma.trace"])

    def test_xor_detection(self):
        rng = make_rng(4)
        self.assertTrue(is_xor_game(_constant_qc_game(0.5, rng)))
        self.assertFalse(is_xor_game(random_qc_game(2, 2, 2, rng)))


# =============================================================================
# PROBABILITÉS DE GAIN
# =============================================================================


class QCEvaluationTests(SimpleTestCase):
    def test_always_win_and_always_lose(self):
        rng = make_rng(5)
        for value, expected in ((1.0, 1.0), (0.0, 0.0)):
            game = _constant_qc_game(value, rng)
            strategy = random_qc_strategy(game, (2, 3), rng)
            self.assertAlmostEqual(qc_win_prob(game, strategy).raw, expected, delta=1e-12)

    def test_state_within_hermiticity_tolerance(self):
        rng = make_rng(22)
        game = _constant_qc_game(1.0, rng)
        strategy = random_qc_strategy(game, (2, 2), rng)
        # bruit anti-hermitien sous la tolérance d'hermiticité, de trace 4e-10 i
        noise = 1e-10j * np.ones((4, 4))
        noisy = QCStrategy(noise + strategy.sigma, (2, 2), strategy.alice_povm, strategy.bob_povm)
        self.assertLessEqual(hermiticity_residual(noisy.sigma), get_policy().hermitian_tol)
        self.assertAlmostEqual(qc_win_prob(game, noisy).raw, 1.0, delta=1e-12)

    def test_matches_explicit_permutation_oracle(self):
        rng = make_rng(6)
        game = random_qc_game(2, 3, 2, rng)
        strategy = random_qc_strategy(game, (2, 2), rng)
        dims = (2, 2, 2, 3, 2)
        unitary = _permutation_unitary(dims, (0, 2, 3, 4, 1))
        joint = unitary @ kron(strategy.sigma, game.rho) @ unitary.T
        expected = sum(
            np.trace(kron(strategy.alice_povm[a], game.win_op(a, b), strategy.bob_povm[b]) @ joint).real
            for a in range(2)
            for b in range(2)
        )
        self.assertAlmostEqual(qc_win_prob(game, strategy).raw, expected, delta=1e-12)

    def test_born_sampling_agrees(self):
        rng = make_rng(7)
        game = random_qc_game(2, 2, 2, rng)
        strategy = random_qc_strategy(game, (1, 2), rng)
        exact = qc_win_prob(game, strategy).raw
        sampled = _born_sample_win_rate(game, strategy, 40000, rng)
        # quatre écarts-types
        self.assertLess(abs(sampled - exact), 4 * np.sqrt(0.25 / 40000))

    def test_dimension_mismatch(self):
        rng = make_rng(8)
        game = random_qc_game(2, 2, 2, rng)
        other = random_qc_game(3, 2, 2, rng)
        strategy = random_qc_strategy(other, (1, 1), rng)
        with self.assertRaises(DimensionMismatch) as context:
            qc_win_prob(game, strategy)
        self.assertEqual(context.exception.expected, [2, 2, 2, 2])
        self.assertEqual(context.exception.received, [3, 2, 2, 2])

    def test_range_for_valid_inputs(self):
        rng = make_rng(9)
        for _ in range(20):
            game = random_qc_game(2, 2, 2, rng)
            raw = qc_win_prob(game, random_qc_strategy(game, (2, 2), rng)).raw
            self.assertGreaterEqual(raw, -1e-9)
            self.assertLessEqual(raw, 1 + 1e-9)


class ExtendedEvaluationTests(SimpleTestCase):
    def setUp(self):
        self.rng = make_rng(10)
        ref_ops = np.empty((2, 2, 2, 3, 2, 2), dtype=complex)
        for index in np.ndindex(2, 2, 2, 3):
            povm = random_povm(2, 2, self.rng)
            ref_ops[index] = povm[0]
        pi = self.rng.random((2, 3))
        self.game = ExtendedGame(pi=pi / pi.sum(), ref_dim=2, ref_ops=ref_ops)

    def test_trivial_referee_wins(self):
        game = ExtendedGame(
            pi=self.game.pi,
            ref_dim=2,
            ref_ops=np.broadcast_to(np.eye(2), self.game.ref_ops.shape),
        )
        strategy = random_enlg_strategy(game, (2, 2), self.rng)
        self.assertAlmostEqual(enlg_win_prob(game, strategy).raw, 1.0, delta=1e-12)

    def test_matches_direct_loop(self):
        strategy = random_enlg_strategy(self.game, (2, 2), self.rng)
        expected = 0.0
        for a, b, x, y in np.ndindex(2, 2, 2, 3):
            operator = kron(
                strategy.alice_povms[x, a], self.game.ref_op(a, b, x, y), strategy.bob_povms[y, b]
            )
            expected += self.game.pi[x, y] * np.trace(operator @ strategy.sigma).real
        self.assertAlmostEqual(enlg_win_prob(self.game, strategy).raw, expected, delta=1e-12)

    def test_product_state_reduces_to_referee_average(self):
        sigma_u, rho_r, sigma_v = (random_density(2, self.rng) for _ in range(3))
        uniform_alice = np.broadcast_to(0.5 * np.eye(2), (2, 2, 2, 2))
        uniform_bob = np.broadcast_to(0.5 * np.eye(2), (3, 2, 2, 2))
        strategy = ENLGStrategy(
            sigma=kron(sigma_u, rho_r, sigma_v),
            dims=(2, 2, 2),
            alice_povms=uniform_alice,
            bob_povms=uniform_bob,
        )
        expected = sum(
            0.25 * self.game.pi[x, y] * np.trace(self.game.ref_op(a, b, x, y) @ rho_r).real
            for a, b, x, y in np.ndindex(2, 2, 2, 3)
        )
        self.assertAlmostEqual(enlg_win_prob(self.game, strategy).raw, expected, delta=1e-12)

    def test_linear_in_state(self):
        first = random_enlg_strategy(self.game, (2, 2), self.rng)
        other = random_density(8, self.rng)
        second = ENLGStrategy(other, first.dims, first.alice_povms, first.bob_povms)
        mixed = ENLGStrategy(
            0.3 * first.sigma + 0.7 * other, first.dims, first.alice_povms, first.bob_povms
        )
        combined = 0.3 * enlg_win_prob(self.game, first).raw + 0.7 * enlg_win_prob(self.game, second).raw
        self.assertAlmostEqual(enlg_win_prob(self.game, mixed).raw, combined, delta=1e-12)

    def test_payoff_operator_is_hermitian(self):
        strategy = random_enlg_strategy(self.game, (2, 1), self.rng)
        payoff = payoff_operator(self.game, strategy.alice_povms, strategy.bob_povms)
        self.assertEqual(payoff.shape, (4, 4))
        np.testing.assert_allclose(payoff, payoff.conj().T, atol=1e-14)

    def test_incompatible_strategy(self):
        game = ExtendedGame(pi=np.full((2, 2), 0.25), ref_dim=2, ref_ops=np.ones((2, 2, 2, 2, 2, 2)))
        strategy = random_enlg_strategy(game, (1, 1), self.rng)
        with self.assertRaises(DimensionMismatch):
            enlg_win_prob(self.game, strategy)


# =============================================================================
# GÉNÉRATEURS ALÉATOIRES
# =============================================================================


class SamplingTests(SimpleTestCase):
    def test_same_seed_same_draws(self):
        first = random_qc_game(2, 2, 2, make_rng(42))
        second = random_qc_game(2, 2, 2, make_rng(42))
        np.testing.assert_array_equal(first.rho, second.rho)
        np.testing.assert_array_equal(first.win_ops, second.win_ops)

    def test_spawned_generators_differ(self):
        first, second = spawn_rngs(0, 2)
        self.assertNotEqual(first.random(), second.random())

    def test_povms_are_complete(self):
        rng = make_rng(11)
        for povm in (random_povm(3, 2, rng), random_projective_povm(3, 2, rng)):
            np.testing.assert_allclose(povm.sum(axis=0), np.eye(3), atol=1e-12)
        projective = random_projective_povm(4, 2, rng)
        for element in projective:
            np.testing.assert_allclose(element @ element, element, atol=1e-12)
