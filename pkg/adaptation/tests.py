from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase, tag

from construction.builders import build_enlg, weyl_basis
from games.evaluation import enlg_win_prob, qc_payoff_operator, qc_win_prob
from games.exceptions import DimensionMismatch, ValidationFailed
from games.models import QCGame, QCStrategy
from games.sampling import make_rng, random_density, random_enlg_strategy, random_qc_game, random_qc_strategy
from games.validators import validate_enlg_strategy, validate_qc_strategy

from .adapters import adapt_enlg_to_qc, adapt_qc_to_enlg, backward_measurements, forward_state, teleportation_basis
from .analysis import backward_joint_state, expectation, loss_operator_g, loss_operator_h
from .models import AdaptationReceipt


def _constant_game(value, rng, dims=(2, 2, 2)):
    n, s, m = dims
    return QCGame(
        rho=random_density(n * s * m, rng),
        dims=dims,
        win_ops=np.broadcast_to(value * np.eye(s), (2, 2, s, s)),
    )


class ReceiptTests(SimpleTestCase):
    def test_residual_and_scale(self):
        receipt = AdaptationReceipt.from_losses(0.4, 0.1, Fraction(1, 4))
        self.assertEqual(receipt.scale, Fraction(1, 4))
        self.assertAlmostEqual(receipt.residual, 0.0)
        self.assertTrue(receipt.ok)
        self.assertEqual(receipt.as_dict()["scale"], "1/4")

    def test_large_residual(self):
        receipt = AdaptationReceipt.from_losses(0.1, 0.5, 4)
        self.assertAlmostEqual(receipt.residual, 0.1)
        self.assertFalse(receipt.ok)


# =============================================================================
# G -> H
# =============================================================================


class ForwardAdapterTests(SimpleTestCase):
    def test_always_win_fixed_point(self):
        rng = make_rng(1)
        game = _constant_game(1.0, rng)
        _, receipt = adapt_qc_to_enlg(game, random_qc_strategy(game, (2, 2), rng))
        self.assertAlmostEqual(receipt.source_loss, 0.0, delta=1e-12)
        self.assertAlmostEqual(receipt.target_loss, 0.0, delta=1e-12)

    def test_always_lose_gives_inverse_nm(self):
        rng = make_rng(2)
        game = _constant_game(0.0, rng, dims=(2, 2, 3))
        _, receipt = adapt_qc_to_enlg(game, random_qc_strategy(game, (1, 2), rng))
        self.assertAlmostEqual(receipt.source_loss, 1.0, delta=1e-12)
        self.assertAlmostEqual(receipt.target_loss, 1 / 6, delta=1e-10)
        self.assertEqual(receipt.scale, Fraction(1, 6))

    def test_random_instance_matches_direct_evaluation(self):
        rng = make_rng(3)
        game = random_qc_game(2, 2, 2, rng)
        strategy = random_qc_strategy(game, (2, 2), rng)
        adapted, receipt = adapt_qc_to_enlg(game, strategy)
        direct = enlg_win_prob(build_enlg(game), adapted).raw
        q_g = qc_win_prob(game, strategy).loss
        self.assertAlmostEqual(1 - direct, q_g / 4, delta=1e-9)
        self.assertLess(receipt.residual, 1e-9)

    def test_adapted_strategy_is_valid_and_sized(self):
        rng = make_rng(4)
        game = random_qc_game(2, 3, 3, rng)
        strategy = random_qc_strategy(game, (2, 1), rng)
        extended = build_enlg(game)
        adapted, _ = adapt_qc_to_enlg(game, strategy, extended)
        self.assertTrue(validate_enlg_strategy(adapted, extended).ok)
        self.assertEqual(adapted.dims, (4, 6, 3))
        self.assertEqual(adapted.total_dim, strategy.total_dim * game.n * game.m)

    def test_forward_state_marginal(self):
        rng = make_rng(5)
        game = random_qc_game(2, 2, 2, rng)
        strategy = random_qc_strategy(game, (1, 1), rng)
        state = forward_state(game, strategy)
        self.assertAlmostEqual(np.trace(state).real, 1.0, delta=1e-12)
        np.testing.assert_allclose(state, state.conj().T, atol=1e-14)

    def test_rejects_mismatched_strategy(self):
        rng = make_rng(6)
        game = random_qc_game(2, 2, 2, rng)
        other = random_qc_game(3, 2, 2, rng)
        with self.assertRaises(DimensionMismatch):
            adapt_qc_to_enlg(game, random_qc_strategy(other, (1, 1), rng))

    def test_rejects_invalid_strategy(self):
        rng = make_rng(7)
        game = random_qc_game(2, 2, 2, rng)
        strategy = random_qc_strategy(game, (1, 1), rng)
        broken = QCStrategy(2 * strategy.sigma, strategy.dims, strategy.alice_povm, strategy.bob_povm)
        with self.assertRaises(ValidationFailed):
            adapt_qc_to_enlg(game, broken)

    @tag("slow")
    def test_forward_loss_identity(self):
        rng = make_rng(100)
        for index in range(100):
            game = random_qc_game(2, int(rng.integers(2, 4)), 2, rng)
            dims = tuple(int(d) for d in rng.integers(1, 3, size=2))
            strategy = random_qc_strategy(game, dims, rng)
            adapted, _ = adapt_qc_to_enlg(game, strategy)
            lose_h = 1 - enlg_win_prob(build_enlg(game), adapted).raw
            lose_g = qc_win_prob(game, strategy).loss
            self.assertLess(abs(lose_h - lose_g / 4), 1e-9, msg=f"instance {index}")


# =============================================================================
# H -> G
# =============================================================================


class BackwardAdapterTests(SimpleTestCase):
    def test_teleportation_bases_resolve_identity(self):
        for d in (2, 3):
            ops = weyl_basis(d).ops
            for side in ("right", "left"):
                basis = teleportation_basis(ops, side)
                np.testing.assert_allclose(basis.sum(axis=0), np.eye(d * d), atol=1e-12)

    def test_adapted_povms_are_complete(self):
        rng = make_rng(8)
        game = random_qc_game(2, 2, 3, rng)
        extended = build_enlg(game)
        strategy = random_enlg_strategy(extended, (2, 1), rng)
        alice, bob = backward_measurements(game, strategy)
        np.testing.assert_allclose(alice.sum(axis=0), np.eye(alice.shape[-1]), atol=1e-12)
        np.testing.assert_allclose(bob.sum(axis=0), np.eye(bob.shape[-1]), atol=1e-12)
        adapted, _ = adapt_enlg_to_qc(game, strategy, extended)
        self.assertTrue(validate_qc_strategy(adapted, game).ok)
        self.assertEqual(adapted.dims, (4, 3))

    def test_always_win_zero_loss(self):
        rng = make_rng(9)
        game = _constant_game(1.0, rng)
        extended = build_enlg(game)
        _, receipt = adapt_enlg_to_qc(game, random_enlg_strategy(extended, (2, 2), rng), extended)
        self.assertAlmostEqual(receipt.source_loss, 0.0, delta=1e-12)
        self.assertAlmostEqual(receipt.target_loss, 0.0, delta=1e-12)

    def test_random_instance_matches_direct_evaluation(self):
        rng = make_rng(10)
        game = random_qc_game(2, 2, 2, rng)
        extended = build_enlg(game)
        strategy = random_enlg_strategy(extended, (2, 2), rng)
        adapted, receipt = adapt_enlg_to_qc(game, strategy, extended)
        q_h = enlg_win_prob(extended, strategy).loss
        self.assertAlmostEqual(qc_win_prob(game, adapted).loss, 4 * q_h, delta=1e-9)
        self.assertEqual(receipt.scale, Fraction(4))

    def test_rejects_wrong_referee_dimension(self):
        rng = make_rng(11)
        game = random_qc_game(2, 2, 2, rng)
        other = build_enlg(random_qc_game(2, 2, 3, rng))
        with self.assertRaises(DimensionMismatch):
            adapt_enlg_to_qc(game, random_enlg_strategy(other, (1, 1), rng))

    def test_round_trip_keeps_value(self):
        rng = make_rng(12)
        game = random_qc_game(2, 2, 2, rng)
        strategy = random_qc_strategy(game, (1, 2), rng)
        extended = build_enlg(game)
        forward, _ = adapt_qc_to_enlg(game, strategy, extended)
        back, _ = adapt_enlg_to_qc(game, forward, extended)
        original = qc_win_prob(game, strategy).raw
        self.assertGreaterEqual(qc_win_prob(game, back).raw, original - 1e-9)
        self.assertAlmostEqual(qc_win_prob(game, back).raw, original, delta=1e-9)

    def test_entrywise_conjugate_matches_conjugate_game(self):
        # (σ̄, Ā, B̄) réalise l'identité pour le jeu conjugué, pas pour G
        rng = make_rng(18)
        game = random_qc_game(2, 2, 2, rng)
        extended = build_enlg(game)
        strategy = random_enlg_strategy(extended, (1, 1), rng)
        adapted, _ = adapt_enlg_to_qc(game, strategy, extended)
        conjugated = QCStrategy(
            adapted.sigma.conj(), adapted.dims, adapted.alice_povm.conj(), adapted.bob_povm.conj()
        )
        mirrored = QCGame(rho=game.rho.conj(), dims=game.dims, win_ops=game.win_ops.conj())
        lose = qc_win_prob(game, conjugated).loss
        mirrored_h = enlg_win_prob(build_enlg(mirrored), strategy).loss
        self.assertAlmostEqual(lose, 4 * mirrored_h, delta=1e-9)
        self.assertGreater(abs(lose - 4 * enlg_win_prob(extended, strategy).loss), 1e-6)

    @tag("slow")
    def test_backward_loss_identity(self):
        rng = make_rng(200)
        for index in range(100):
            game = random_qc_game(2, int(rng.integers(2, 4)), 2, rng)
            extended = build_enlg(game)
            dims = tuple(int(d) for d in rng.integers(1, 3, size=2))
            strategy = random_enlg_strategy(extended, dims, rng)
            adapted, _ = adapt_enlg_to_qc(game, strategy, extended)
            lose_g = 1 - qc_win_prob(game, adapted).raw
            lose_h = enlg_win_prob(extended, strategy).loss
            self.assertLess(abs(lose_g - 4 * lose_h), 1e-9, msg=f"instance {index}")


# =============================================================================
# DIMENSIONS n ≠ 2 ET n ≠ m
# =============================================================================


class UnequalDimensionTests(SimpleTestCase):
    DIMS = ((3, 2, 2), (2, 2, 3), (3, 2, 3))

    def test_forward_identity(self):
        rng = make_rng(500)
        for n, s, m in self.DIMS:
            game = random_qc_game(n, s, m, rng)
            extended = build_enlg(game)
            for dims in ((1, 1), (2, 1)):
                strategy = random_qc_strategy(game, dims, rng)
                adapted, receipt = adapt_qc_to_enlg(game, strategy, extended)
                lose_h = 1 - enlg_win_prob(extended, adapted).raw
                lose_g = qc_win_prob(game, strategy).loss
                self.assertLess(abs(lose_h - lose_g / (n * m)), 1e-9, msg=f"{(n, s, m)} {dims}")
                self.assertEqual(receipt.scale, Fraction(1, n * m))

    def test_backward_identity(self):
        rng = make_rng(501)
        for n, s, m in self.DIMS:
            game = random_qc_game(n, s, m, rng)
            extended = build_enlg(game)
            for dims in ((1, 1), (1, 2)):
                strategy = random_enlg_strategy(extended, dims, rng)
                adapted, receipt = adapt_enlg_to_qc(game, strategy, extended)
                lose_g = 1 - qc_win_prob(game, adapted).raw
                lose_h = enlg_win_prob(extended, strategy).loss
                self.assertLess(abs(lose_g - n * m * lose_h), 1e-9, msg=f"{(n, s, m)} {dims}")
                self.assertEqual(receipt.scale, Fraction(n * m))
                self.assertTrue(validate_qc_strategy(adapted, game).ok)

    def test_identities_through_operators(self):
        rng = make_rng(502)
        for n, s, m in self.DIMS:
            game = random_qc_game(n, s, m, rng)
            extended = build_enlg(game)
            forward = random_qc_strategy(game, (1, 1), rng)
            value = expectation(loss_operator_h(game, forward, extended), forward_state(game, forward))
            self.assertAlmostEqual(value, qc_win_prob(game, forward).loss / (n * m), delta=1e-10)

            backward = random_enlg_strategy(extended, (1, 1), rng)
            value = expectation(
                loss_operator_g(game, backward, extended), backward_joint_state(game, backward)
            )
            self.assertAlmostEqual(value, n * m * enlg_win_prob(extended, backward).loss, delta=1e-10)

    def test_round_trip(self):
        rng = make_rng(503)
        for n, s, m in self.DIMS:
            game = random_qc_game(n, s, m, rng)
            extended = build_enlg(game)
            strategy = random_qc_strategy(game, (1, 1), rng)
            forward, _ = adapt_qc_to_enlg(game, strategy, extended)
            back, _ = adapt_enlg_to_qc(game, forward, extended)
            self.assertAlmostEqual(
                qc_win_prob(game, back).raw, qc_win_prob(game, strategy).raw, delta=1e-9
            )


# =============================================================================
# OPÉRATEURS DE PERTE
# =============================================================================


class LossOperatorTests(SimpleTestCase):
    def test_always_win_game_has_zero_operator(self):
        rng = make_rng(13)
        game = _constant_game(1.0, rng)
        operator = loss_operator_h(game, random_qc_strategy(game, (1, 1), rng))
        np.testing.assert_allclose(operator, np.zeros_like(operator), atol=1e-12)

    def test_always_lose_expectation(self):
        rng = make_rng(14)
        game = _constant_game(0.0, rng)
        strategy = random_qc_strategy(game, (2, 1), rng)
        operator = loss_operator_h(game, strategy)
        self.assertAlmostEqual(expectation(operator, forward_state(game, strategy)), 0.25, delta=1e-10)

    def test_operator_bounds(self):
        rng = make_rng(15)
        game = random_qc_game(2, 2, 2, rng)
        operator = loss_operator_h(game, random_qc_strategy(game, (1, 1), rng))
        values = np.linalg.eigvalsh(operator)
        self.assertGreaterEqual(values.min(), -1e-9)
        self.assertLessEqual(values.max(), 1 + 1e-9)

    def test_complementary_outcomes(self):
        rng = make_rng(16)
        game = random_qc_game(2, 2, 2, rng)
        extended = build_enlg(game)
        strategy = random_enlg_strategy(extended, (1, 2), rng)
        losing = loss_operator_g(game, strategy, extended)
        alice, bob = backward_measurements(game, strategy)
        winning = qc_payoff_operator(game, alice, bob, outcome="win")
        np.testing.assert_allclose(losing + winning, np.eye(losing.shape[0]), atol=1e-12)

    def test_always_win_extended_strategy(self):
        rng = make_rng(17)
        game = _constant_game(1.0, rng)
        extended = build_enlg(game)
        strategy = random_enlg_strategy(extended, (1, 1), rng)
        operator = loss_operator_g(game, strategy, extended)
        self.assertAlmostEqual(expectation(operator, backward_joint_state(game, strategy)), 0.0, delta=1e-12)

    def test_forward_identity_through_operator(self):
        rng = make_rng(300)
        for _ in range(25):
            game = random_qc_game(2, 2, 2, rng)
            extended = build_enlg(game)
            strategy = random_qc_strategy(game, (1, 2), rng)
            value = expectation(loss_operator_h(game, strategy, extended), forward_state(game, strategy))
            self.assertAlmostEqual(value, qc_win_prob(game, strategy).loss / 4, delta=1e-10)
            adapted, _ = adapt_qc_to_enlg(game, strategy, extended)
            self.assertAlmostEqual(value, 1 - enlg_win_prob(extended, adapted).raw, delta=1e-10)

    def test_backward_identity_through_operator(self):
        rng = make_rng(400)
        for _ in range(25):
            game = random_qc_game(2, 2, 2, rng)
            extended = build_enlg(game)
            strategy = random_enlg_strategy(extended, (1, 1), rng)
            value = expectation(
                loss_operator_g(game, strategy, extended), backward_joint_state(game, strategy)
            )
            self.assertAlmostEqual(value, 4 * enlg_win_prob(extended, strategy).loss, delta=1e-10)
