import numpy as np
from django.test import SimpleTestCase, override_settings

from .exceptions import EmptyKeepSet, NoConvergence, NonSquare, NotAPermutation, NotHermitian, ShapeMismatch
from .models import NumericPolicy, RegisterShape, get_policy
from .operators import (
    adjoint,
    conj,
    eigenvalue_bounds,
    hermitian_eig,
    hs_inner,
    hermiticity_residual,
    inverse_permutation,
    jacobi_eigh,
    kron,
    partial_trace,
    permute_registers,
    projector,
    top_eigenvector,
    transpose,
)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.diag([1.0, -1.0]).astype(complex)


def _random_hermitian(size, rng):
    matrix = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    return (matrix + matrix.conj().T) / 2


class RegisterShapeTests(SimpleTestCase):
    def test_total_and_check(self):
        shape = RegisterShape((2, 3, 1))
        self.assertEqual(shape.total, 6)
        self.assertEqual(len(shape), 3)
        with self.assertRaises(ShapeMismatch):
            shape.check(np.eye(5))

    def test_invalid_dimensions(self):
        with self.assertRaises(ShapeMismatch):
            RegisterShape((2, 0))


class PolicyTests(SimpleTestCase):
    def test_defaults(self):
        self.assertEqual(NumericPolicy().psd_tol, 1e-9)

    @override_settings(NUMERIC_POLICY={"PSD_TOL": 1e-7, "EIGENSOLVER": "jacobi"})
    def test_settings_override(self):
        policy = get_policy()
        self.assertEqual(policy.psd_tol, 1e-7)
        self.assertEqual(policy.eigensolver, "jacobi")
        self.assertEqual(policy.trace_tol, 1e-10)


class ElementaryOperationTests(SimpleTestCase):
    def test_kron_identities(self):
        np.testing.assert_array_equal(kron(np.eye(2), np.eye(3)), np.eye(6))
        np.testing.assert_array_equal(kron(PAULI_X, [[1.0]]), PAULI_X)
        rng = np.random.default_rng(0)
        a, b, c = (rng.normal(size=(2, 2)) for _ in range(3))
        np.testing.assert_allclose(kron(a, b, c), kron(kron(a, b), c))

    def test_conj_and_transpose(self):
        matrix = np.array([[1 + 2j, 3], [4j, 5]])
        np.testing.assert_array_equal(conj(matrix), [[1 - 2j, 3], [-4j, 5]])
        np.testing.assert_array_equal(transpose(matrix), [[1 + 2j, 4j], [3, 5]])
        np.testing.assert_array_equal(adjoint(matrix), [[1 - 2j, -4j], [3, 5]])

    def test_hs_inner(self):
        self.assertEqual(hs_inner(PAULI_X, PAULI_X), 2.0)
        self.assertEqual(hs_inner(PAULI_X, PAULI_Z), 0.0)
        self.assertEqual(hs_inner(1j * np.eye(2), np.eye(2)), -2j)
        with self.assertRaises(ShapeMismatch):
            hs_inner(np.eye(2), np.eye(3))

    def test_hs_inner_with_itself_is_nonnegative(self):
        rng = np.random.default_rng(13)
        for size in (1, 3, 6):
            matrix = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
            value = hs_inner(matrix, matrix)
            self.assertAlmostEqual(value.imag, 0.0, delta=1e-12)
            self.assertGreaterEqual(value.real, 0.0)
            self.assertAlmostEqual(value.real, np.linalg.norm(matrix) ** 2, delta=1e-9)

    def test_projector(self):
        vector = np.array([1, 1j]) / np.sqrt(2)
        np.testing.assert_allclose(projector(vector), [[0.5, -0.5j], [0.5j, 0.5]])


# =============================================================================
# REGISTRES
# =============================================================================


class PartialTraceTests(SimpleTestCase):
    def test_product_state(self):
        rng = np.random.default_rng(1)
        first, second = _random_hermitian(2, rng), _random_hermitian(3, rng)
        second = second + 5 * np.eye(3)
        product = kron(first, second)
        np.testing.assert_allclose(partial_trace(product, (2, 3), (0,)), first * np.trace(second))
        np.testing.assert_allclose(partial_trace(product, (2, 3), (1,)), second * np.trace(first))

    def test_matches_loop_oracle(self):
        rng = np.random.default_rng(2)
        matrix = _random_hermitian(12, rng)
        tensor = matrix.reshape(2, 3, 2, 2, 3, 2)
        expected = np.zeros((4, 4), dtype=complex)
        for j in range(3):
            expected += tensor[:, j, :, :, j, :].reshape(4, 4)
        np.testing.assert_allclose(partial_trace(matrix, (2, 3, 2), (0, 2)), expected, atol=1e-12)

    def test_keep_order_is_original_order(self):
        rng = np.random.default_rng(3)
        first, second, third = (_random_hermitian(d, rng) for d in (2, 3, 2))
        product = kron(first, second, third)
        reduced = partial_trace(product, (2, 3, 2), (2, 0))
        np.testing.assert_allclose(reduced, kron(first, third) * np.trace(second), atol=1e-12)

    def test_full_trace(self):
        rng = np.random.default_rng(4)
        matrix = _random_hermitian(6, rng)
        reduced = partial_trace(matrix, (2, 3), (0, 1))
        np.testing.assert_allclose(reduced, matrix)

    def test_linearity(self):
        rng = np.random.default_rng(12)
        first, second = _random_hermitian(12, rng), _random_hermitian(12, rng)
        alpha, beta = 0.3 - 1.2j, 2.5
        for keep in ((0,), (1, 2), (2, 0)):
            combined = partial_trace(alpha * first + beta * second, (2, 3, 2), keep)
            expected = alpha * partial_trace(first, (2, 3, 2), keep) + beta * partial_trace(
                second, (2, 3, 2), keep
            )
            np.testing.assert_allclose(combined, expected, atol=1e-12)

    def test_errors(self):
        with self.assertRaises(EmptyKeepSet):
            partial_trace(np.eye(4), (2, 2), ())
        with self.assertRaises(ShapeMismatch):
            partial_trace(np.eye(5), (2, 2), (0,))


class PermutationTests(SimpleTestCase):
    def test_swap_two_registers(self):
        rng = np.random.default_rng(5)
        first, second = _random_hermitian(2, rng), _random_hermitian(3, rng)
        swapped = permute_registers(kron(first, second), (2, 3), (1, 0))
        np.testing.assert_allclose(swapped, kron(second, first))

    def test_cycle_on_five_registers(self):
        rng = np.random.default_rng(6)
        dims = (2, 1, 2, 3, 2)
        factors = [_random_hermitian(d, rng) for d in dims]
        moved = permute_registers(kron(*factors), dims, (0, 2, 3, 4, 1))
        expected = kron(factors[0], factors[2], factors[3], factors[4], factors[1])
        np.testing.assert_allclose(moved, expected, atol=1e-12)

    def test_inverse_restores(self):
        rng = np.random.default_rng(7)
        dims = (2, 3, 2)
        perm = (2, 0, 1)
        matrix = _random_hermitian(12, rng)
        moved = permute_registers(matrix, dims, perm)
        back = permute_registers(moved, [dims[p] for p in perm], inverse_permutation(perm))
        np.testing.assert_allclose(back, matrix)

    def test_spectrum_preserved(self):
        rng = np.random.default_rng(8)
        dims = (2, 3, 2)
        matrix = _random_hermitian(12, rng)
        for perm in ((1, 2, 0), (2, 1, 0), (0, 2, 1)):
            moved = permute_registers(matrix, dims, perm)
            np.testing.assert_allclose(
                np.linalg.eigvalsh(moved), np.linalg.eigvalsh(matrix), atol=1e-10
            )
            self.assertAlmostEqual(np.trace(moved).real, np.trace(matrix).real, delta=1e-10)

    def test_not_a_permutation(self):
        with self.assertRaises(NotAPermutation):
            permute_registers(np.eye(4), (2, 2), (0, 0))


# =============================================================================
# VALEURS PROPRES
# =============================================================================


class EigenTests(SimpleTestCase):
    def test_diagonal(self):
        values, vectors = hermitian_eig(np.diag([0.2, 0.9, 0.5]))
        np.testing.assert_allclose(values, [0.9, 0.5, 0.2])
        self.assertAlmostEqual(abs(vectors[1, 0]), 1.0)

    def test_pauli_x(self):
        values, vectors = hermitian_eig(PAULI_X)
        np.testing.assert_allclose(values, [1.0, -1.0], atol=1e-14)
        np.testing.assert_allclose(abs(vectors[:, 0]), [1 / np.sqrt(2)] * 2, atol=1e-14)

    def test_reconstruction(self):
        rng = np.random.default_rng(9)
        matrix = _random_hermitian(6, rng)
        values, vectors = hermitian_eig(matrix)
        np.testing.assert_allclose(vectors @ np.diag(values) @ vectors.conj().T, matrix, atol=1e-10)
        np.testing.assert_allclose(vectors.conj().T @ vectors, np.eye(6), atol=1e-10)

    def test_rejects_bad_input(self):
        with self.assertRaises(NonSquare):
            hermitian_eig(np.ones((2, 3)))
        with self.assertRaises(NotHermitian):
            hermitian_eig(np.array([[0, 1], [0, 0]], dtype=complex))

    def test_bounds_and_top_vector(self):
        lowest, highest = eigenvalue_bounds(PAULI_Y)
        self.assertAlmostEqual(lowest, -1.0, places=12)
        self.assertAlmostEqual(highest, 1.0, places=12)
        value, vector = top_eigenvector(np.diag([0.2, 0.9, 0.5]))
        self.assertAlmostEqual(value, 0.9)
        self.assertAlmostEqual(abs(vector[1]), 1.0)

    def test_hermiticity_residual(self):
        matrix = np.eye(2, dtype=complex)
        matrix[0, 1] = 1e-12
        self.assertLessEqual(hermiticity_residual(matrix), get_policy().hermitian_tol)
        matrix[0, 1] = 1e-3
        self.assertGreater(hermiticity_residual(matrix), get_policy().hermitian_tol)

    def test_residual_is_absolute_near_zero(self):
        # effet presque nul avec un bruit anti-hermitien d'arrondi
        tiny = np.array([[1e-17, 3e-17j], [3e-17j, 0.0]])
        self.assertLess(hermiticity_residual(tiny), 1e-15)
        values, _ = hermitian_eig(tiny)
        np.testing.assert_allclose(values, [0.0, 0.0], atol=1e-15)
        self.assertEqual(hermiticity_residual(np.zeros((3, 3))), 0.0)


class JacobiTests(SimpleTestCase):
    def test_matches_lapack(self):
        rng = np.random.default_rng(10)
        for size in (1, 2, 5, 9):
            matrix = _random_hermitian(size, rng)
            values, vectors = jacobi_eigh(matrix)
            order = np.argsort(values)
            np.testing.assert_allclose(values[order], np.linalg.eigvalsh(matrix), atol=1e-10)
            np.testing.assert_allclose(
                vectors @ np.diag(values) @ vectors.conj().T, matrix, atol=1e-10
            )

    def test_zero_matrix(self):
        values, vectors = jacobi_eigh(np.zeros((3, 3)))
        np.testing.assert_array_equal(values, np.zeros(3))
        np.testing.assert_array_equal(vectors, np.eye(3))

    def test_sweep_cap(self):
        rng = np.random.default_rng(11)
        with self.assertRaises(NoConvergence):
            jacobi_eigh(_random_hermitian(6, rng), max_sweeps=1, offdiag_tol=1e-15)

    @override_settings(NUMERIC_POLICY={"EIGENSOLVER": "jacobi"})
    def test_selected_through_policy(self):
        values, _ = hermitian_eig(PAULI_Y)
        np.testing.assert_allclose(values, [1.0, -1.0], atol=1e-12)
