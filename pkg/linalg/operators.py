# operators.py - Opérations d'algèbre linéaire sur matrices complexes denses
import logging
import string
from functools import reduce

import numpy as np

from .exceptions import (
    EmptyKeepSet,
    NoConvergence,
    NonSquare,
    NotAPermutation,
    NotHermitian,
    ShapeMismatch,
)
from .models import RegisterShape, get_policy

logger = logging.getLogger(__name__)


def as_matrix(value):
    matrix = np.asarray(value, dtype=np.complex128)
    if matrix.ndim != 2:
        raise ShapeMismatch(f"Matrice attendue, tableau de dimension {matrix.ndim} reçu")
    return matrix


# =============================================================================
# CONSTRUCTIONS ÉLÉMENTAIRES
# =============================================================================


def kron(first, second, *rest):
    """Produit de Kronecker, étendu à un nombre quelconque de facteurs."""
    return reduce(np.kron, (as_matrix(m) for m in (first, second, *rest)))


def conj(matrix):
    return np.conj(as_matrix(matrix))


def transpose(matrix):
    return as_matrix(matrix).T.copy()


def adjoint(matrix):
    return as_matrix(matrix).conj().T.copy()


def hs_inner(first, second):
    """Produit scalaire de Hilbert-Schmidt <A, B> = Tr(A* B)."""
    first, second = as_matrix(first), as_matrix(second)
    if first.shape != second.shape:
        raise ShapeMismatch(f"Dimensions différentes : {first.shape} et {second.shape}")
    return complex(np.vdot(first, second))


def projector(vector):
    vector = np.asarray(vector, dtype=np.complex128).reshape(-1, 1)
    return vector @ vector.conj().T


def hermitian_part(matrix):
    matrix = as_matrix(matrix)
    return (matrix + matrix.conj().T) / 2


# =============================================================================
# REGISTRES : TRACE PARTIELLE ET PERMUTATION
# =============================================================================


def _tensor_view(matrix, shape):
    shape = shape if isinstance(shape, RegisterShape) else RegisterShape(tuple(shape))
    matrix = as_matrix(matrix)
    shape.check(matrix)
    return matrix.reshape(shape.dims + shape.dims), shape


def partial_trace(matrix, shape, keep):
    """
    Trace sur les registres absents de `keep`; les registres conservés
    gardent leur ordre d'origine.
    """
    tensor, shape = _tensor_view(matrix, shape)
    keep = sorted(set(keep))
    if not keep:
        raise EmptyKeepSet("Au moins un registre doit être conservé")
    if keep[0] < 0 or keep[-1] >= len(shape):
        raise ShapeMismatch(f"Registres {keep} hors de {shape.dims}")

    count = len(shape)
    letters = string.ascii_letters
    rows = letters[:count]
    cols = [letters[count + i] if i in keep else rows[i] for i in range(count)]
    output = "".join(rows[i] for i in keep) + "".join(cols[i] for i in keep)
    reduced = np.einsum(f"{rows}{''.join(cols)}->{output}", tensor)
    size = int(np.prod([shape.dims[i] for i in keep]))
    return reduced.reshape(size, size)


def check_permutation(perm, count):
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(count)):
        raise NotAPermutation(f"{perm} n'est pas une permutation de {count} registres")
    return perm


def permute_registers(matrix, shape, perm):
    """
    Conjugue `matrix` par l'unitaire W de réordonnancement des registres.

    `perm[i]` est l'indice, dans l'ordre d'origine, du registre placé en
    position i. Exemple : (U,V,X,S,Y) -> (U,X,S,Y,V) s'écrit (0, 2, 3, 4, 1).
    """
    tensor, shape = _tensor_view(matrix, shape)
    perm = check_permutation(perm, len(shape))
    count = len(shape)
    axes = list(perm) + [count + p for p in perm]
    return tensor.transpose(axes).reshape(shape.total, shape.total).copy()


def inverse_permutation(perm):
    inverse = [0] * len(perm)
    for position, source in enumerate(perm):
        inverse[source] = position
    return tuple(inverse)


# =============================================================================
# DÉCOMPOSITION SPECTRALE HERMITIENNE
# =============================================================================


def hermiticity_residual(matrix):
    """‖M - M*‖ / max(1, ‖M‖) : relatif pour les grandes normes, absolu près de zéro."""
    matrix = as_matrix(matrix)
    scale = max(1.0, float(np.linalg.norm(matrix)))
    return float(np.linalg.norm(matrix - matrix.conj().T) / scale)


def _jacobi_rotate(work, vectors, p, q):
    apq = work[p, q]
    magnitude = abs(apq)
    if magnitude == 0.0:
        return
    phase = np.conj(apq / magnitude)
    theta = (work[q, q].real - work[p, p].real) / (2.0 * magnitude)
    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    rotation = np.array([[c, s], [-s * phase, c * phase]], dtype=np.complex128)

    pair = [p, q]
    work[:, pair] = work[:, pair] @ rotation
    work[pair, :] = rotation.conj().T @ work[pair, :]
    work[p, q] = work[q, p] = 0.0
    vectors[:, pair] = vectors[:, pair] @ rotation


def jacobi_eigh(matrix, max_sweeps=100, offdiag_tol=1e-12):
    """
    Rotations de Jacobi cycliques sur une matrice hermitienne.

    Chaque rotation rend d'abord A[p, q] réel par une phase sur la colonne q,
    puis annule l'élément par une rotation réelle classique.
    """
    work = hermitian_part(matrix).copy()
    size = work.shape[0]
    vectors = np.eye(size, dtype=np.complex128)
    scale = np.linalg.norm(work)
    if scale == 0.0:
        return np.zeros(size), vectors

    for sweep in range(max_sweeps):
        logger.debug("Jacobi : balayage %d", sweep)
        off = np.linalg.norm(work - np.diag(np.diag(work)))
        if off <= offdiag_tol * scale:
            return np.real(np.diag(work)).copy(), vectors
        for p in range(size - 1):
            for q in range(p + 1, size):
                _jacobi_rotate(work, vectors, p, q)
        work = hermitian_part(work)

    raise NoConvergence(f"Jacobi : pas de convergence après {max_sweeps} balayages")


def hermitian_eig(matrix, policy=None):
    """
    Valeurs propres (ordre décroissant) et vecteurs propres en colonnes.

    Dans un groupe de valeurs propres dégénérées, la base orthonormée renvoyée
    est arbitraire : seuls les projecteurs spectraux sont significatifs.
    """
    policy = policy or get_policy()
    matrix = as_matrix(matrix)
    if matrix.shape[0] != matrix.shape[1]:
        raise NonSquare(f"Matrice carrée attendue, reçu {matrix.shape}")
    residual = hermiticity_residual(matrix)
    if residual > policy.hermitian_tol:
        raise NotHermitian(residual)

    if policy.eigensolver == "jacobi":
        values, vectors = jacobi_eigh(
            matrix, policy.jacobi_max_sweeps, policy.jacobi_offdiag_tol
        )
    else:
        values, vectors = np.linalg.eigh(hermitian_part(matrix))

    order = np.argsort(values, kind="stable")[::-1]
    return np.asarray(values[order], dtype=float), vectors[:, order]


def eigenvalue_bounds(matrix, policy=None):
    """(plus petite, plus grande) valeur propre d'une matrice hermitienne."""
    values, _ = hermitian_eig(matrix, policy)
    return float(values[-1]), float(values[0])


def top_eigenvector(matrix, policy=None):
    values, vectors = hermitian_eig(matrix, policy)
    return float(values[0]), vectors[:, 0].copy()
