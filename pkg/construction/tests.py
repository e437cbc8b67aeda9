import numpy as np
from django.test import SimpleTestCase, tag

from games.evaluation import enlg_win_prob
from games.exceptions import InvalidDimension
from games.models import ENLGStrategy, QCGame
from games.sampling import make_rng, random_density, random_enlg_strategy, random_povm, random_qc_game
from games.validators import validate_enlg
from linalg.operators import eigenvalue_bounds, hs_inner, kron, partial_trace

from .builders import build_enlg, max_entangled, reduce_qc, weyl_basis, weyl_twirl
from .catalog import GAMMA, CATALOG, build_rv_game, catalog_game, chsh_game, embed_nonlocal_game


def _constant_game(n, s, m, value, rng):
    """Jeu QC dont tous les Q_{a,b} valent value * I."""
    win_ops = np.broadcast_to(value * np.eye(s), (2, 2, s, s))
    return QCGame(rho=random_density(n * s * m, rng), dims=(n, s, m), win_ops=win_ops)


class WeylBasisTests(SimpleTestCase):
    def test_scalar_case(self):
        basis = weyl_basis(1)
        self.assertEqual(len(basis), 1)
        np.testing.assert_array_equal(basis[0], [[1.0]])

    def test_qubit_basis_is_pauli_family(self):
        z = np.diag([1.0, -1.0])
        x = np.array([[0.0, 1.0], [1.0, 0.0]])
        expected = [np.eye(2), z, x, x @ z]
        for op, target in zip(weyl_basis(2).ops, expected):
            np.testing.assert_allclose(op, target, atol=1e-15)

    def test_unitary_and_orthogonal(self):
        for d in (2, 3, 4):
            ops = weyl_basis(d).ops
            self.assertEqual(len(ops), d * d)
            for i, first in enumerate(ops):
                np.testing.assert_allclose(first @ first.conj().T, np.eye(d), atol=1e-12)
                for j, second in enumerate(ops):
                    expected = d if i == j else 0.0
                    self.assertAlmostEqual(abs(hs_inner(first, second) - expected), 0.0, delta=1e-10)

    def test_zero_dimension_rejected(self):
        with self.assertRaises(InvalidDimension):
            weyl_basis(0)

    def test_twirl_is_trace_times_identity(self):
        rng = make_rng(3)
        for d in (2, 3):
            matrix = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            twirled = weyl_twirl(matrix, weyl_basis(d))
            np.testing.assert_allclose(twirled, np.trace(matrix) / d * np.eye(d), atol=1e-10)


class MaxEntangledTests(SimpleTestCase):
    def test_small_cases(self):
        np.testing.assert_array_equal(max_entangled(1).vector, [1.0])
        np.testing.assert_allclose(max_entangled(2).vector, np.array([1, 0, 0, 1]) / np.sqrt(2))

    def test_marginals_are_maximally_mixed(self):
        density = max_entangled(3).density()
        for keep in ((0,), (1,)):
            np.testing.assert_allclose(
                partial_trace(density, (3, 3), keep), np.eye(3) / 3, atol=1e-14
            )

    def test_invalid_dimension(self):
        with self.assertRaises(InvalidDimension):
            max_entangled(0)


class ReduceTests(SimpleTestCase):
    def test_product_state_with_identity_referee(self):
        rng = make_rng(5)
        rho_x, rho_s, rho_y = (random_density(2, rng) for _ in range(3))
        game = QCGame(
            rho=kron(rho_x, rho_s, rho_y),
            dims=(2, 2, 2),
            win_ops=np.broadcast_to(np.eye(2), (2, 2, 2, 2)),
        )
        reduced = reduce_qc(game)
        np.testing.assert_allclose(reduced.xi, kron(rho_x, rho_y), atol=1e-12)
        for a in range(2):
            for b in range(2):
                np.testing.assert_allclose(reduced.xi_ab[a, b], reduced.xi, atol=1e-12)

    def test_losing_referee_gives_zero(self):
        reduced = reduce_qc(_constant_game(2, 3, 2, 0.0, make_rng(1)))
        np.testing.assert_array_equal(reduced.xi_ab, np.zeros_like(reduced.xi_ab))
        self.assertAlmostEqual(np.trace(reduced.xi).real, 1.0, delta=1e-10)

    def test_operator_ordering(self):
        rng = make_rng(11)
        for _ in range(10):
            reduced = reduce_qc(random_qc_game(2, 2, 3, rng))
            for a in range(2):
                for b in range(2):
                    xi_ab = reduced.xi_ab[a, b]
                    self.assertGreaterEqual(eigenvalue_bounds(xi_ab)[0], -1e-9)
                    self.assertGreaterEqual(eigenvalue_bounds(reduced.xi - xi_ab)[0], -1e-9)
            self.assertLessEqual(eigenvalue_bounds(reduced.xi)[1], 1.0 + 1e-9)


class BuildExtendedGameTests(SimpleTestCase):
    def test_always_win_maps_to_always_win(self):
        game = build_enlg(_constant_game(2, 2, 2, 1.0, make_rng(2)))
        np.testing.assert_allclose(
            game.ref_ops, np.broadcast_to(np.eye(4), game.ref_ops.shape), atol=1e-12
        )

    def test_always_lose_substitution(self):
        qc_game = _constant_game(2, 2, 3, 0.0, make_rng(4))
        game = build_enlg(qc_game)
        xi_t = reduce_qc(qc_game).xi.T
        u, v = weyl_basis(2).ops, weyl_basis(3).ops
        for x, y in ((0, 0), (3, 5), (1, 8)):
            unitary = kron(u[x], v[y])
            expected = np.eye(6) - unitary @ xi_t @ unitary.conj().T
            np.testing.assert_allclose(game.ref_op(1, 0, x, y), expected, atol=1e-12)

    def test_random_game_dimensions_and_validity(self):
        game = build_enlg(random_qc_game(2, 2, 2, make_rng(7)))
        self.assertEqual(tuple(game.question_sets), (4, 4))
        self.assertEqual(game.ref_dim, 4)
        self.assertEqual(game.ref_ops.shape[:4], (2, 2, 4, 4))
        self.assertEqual(int(np.prod(game.ref_ops.shape[:4])), 64)
        np.testing.assert_allclose(game.pi, np.full((4, 4), 1 / 16))
        self.assertTrue(validate_enlg(game).ok)

    def test_loss_cap_small_sample(self):
        rng = make_rng(8)
        game = build_enlg(random_qc_game(2, 2, 2, rng))
        for _ in range(10):
            strategy = random_enlg_strategy(game, (2, 2), rng)
            self.assertLessEqual(enlg_win_prob(game, strategy).loss, 0.25 + 1e-9)

    @tag("slow")
    def test_construction_validity_on_random_games(self):
        rng = make_rng(2024)
        for index in range(200):
            n, s, m = (int(d) for d in rng.integers(2, 4, size=3))
            game = build_enlg(random_qc_game(n, s, m, rng))
            ops = game.ref_ops.reshape(-1, game.ref_dim, game.ref_dim)
            for op in ops:
                lowest, highest = eigenvalue_bounds(op)
                self.assertGreaterEqual(lowest, -1e-9, msg=f"jeu {index}")
                self.assertLessEqual(highest, 1.0 + 1e-9, msg=f"jeu {index}")

    @tag("slow")
    def test_loss_cap_on_random_strategies(self):
        rng = make_rng(4096)
        game = build_enlg(random_qc_game(2, 2, 2, rng))
        for _ in range(100):
            dims = tuple(int(d) for d in rng.integers(1, 3, size=2))
            strategy = random_enlg_strategy(game, dims, rng)
            self.assertLessEqual(enlg_win_prob(game, strategy).loss, 0.25 + 1e-9)


class CatalogTests(SimpleTestCase):
    def test_gamma_vectors(self):
        first, second = GAMMA
        self.assertAlmostEqual(np.vdot(first, first).real, 1.0, delta=1e-15)
        self.assertAlmostEqual(np.vdot(second, second).real, 1.0, delta=1e-15)
        self.assertAlmostEqual(abs(np.vdot(first, second)), 0.0, delta=1e-15)

    def test_rv_game_shape_and_validity(self):
        game = build_rv_game()
        self.assertEqual(tuple(game.question_sets), (9, 9))
        self.assertEqual(tuple(game.answer_sets), (2, 2))
        self.assertEqual(game.ref_dim, 9)
        np.testing.assert_allclose(game.pi.sum(), 1.0)
        self.assertTrue(validate_enlg(game).ok)

    def test_rv_referee_depends_on_xor_only(self):
        game = build_rv_game()
        np.testing.assert_array_equal(game.ref_ops[0, 0], game.ref_ops[1, 1])
        np.testing.assert_array_equal(game.ref_ops[0, 1], game.ref_ops[1, 0])
        # deux opérateurs distincts par paire de questions
        for x, y in ((0, 0), (4, 7)):
            gap = np.linalg.norm(game.ref_op(0, 0, x, y) - game.ref_op(0, 1, x, y))
            self.assertGreater(gap, 0.5)

    def test_unscaled_losing_operator_is_half(self):
        scaled, unscaled = build_rv_game(), build_rv_game(scaled=False)
        identity = np.eye(9)
        np.testing.assert_allclose(
            identity - unscaled.ref_ops, (identity - scaled.ref_ops) / 2, atol=1e-15
        )
        self.assertTrue(validate_enlg(unscaled).ok)

    def test_chsh_embedding(self):
        game = chsh_game()
        self.assertEqual(game.ref_dim, 1)
        self.assertEqual(game.ref_ops.size, 16)
        self.assertTrue(validate_enlg(game).ok)
        self.assertEqual(game.ref_op(1, 1, 1, 1)[0, 0], 0.0)
        self.assertEqual(game.ref_op(1, 0, 1, 1)[0, 0], 1.0)

    def test_always_true_predicate_wins(self):
        rng = make_rng(9)
        game = embed_nonlocal_game(np.full((2, 3), 1 / 6), lambda a, b, x, y: True)
        strategy = random_enlg_strategy(game, (2, 2), rng)
        self.assertAlmostEqual(enlg_win_prob(game, strategy).raw, 1.0, delta=1e-12)

    def test_embedding_matches_direct_summation(self):
        rng = make_rng(10)
        game = chsh_game()
        sigma = random_density(4, rng)
        alice = np.stack([random_povm(2, 2, rng) for _ in range(2)])
        bob = np.stack([random_povm(2, 2, rng) for _ in range(2)])
        strategy = ENLGStrategy(sigma=sigma, dims=(2, 1, 2), alice_povms=alice, bob_povms=bob)
        direct = sum(
            0.25 * np.trace(kron(alice[x, a], bob[y, b]) @ sigma).real
            for a in range(2)
            for b in range(2)
            for x in range(2)
            for y in range(2)
            if (a ^ b) == (x & y)
        )
        self.assertAlmostEqual(enlg_win_prob(game, strategy).raw, direct, delta=1e-12)

    def test_catalog_lookup(self):
        self.assertEqual(sorted(CATALOG), ["chsh", "rv", "rv-unscaled"])
        self.assertEqual(catalog_game("chsh").name, "chsh")
        with self.assertRaises(KeyError):
            catalog_game("inconnu")
