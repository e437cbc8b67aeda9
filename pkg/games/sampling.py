# sampling.py - Générateurs aléatoires reproductibles (Philox, 64 bits, à compteur)
import numpy as np
from scipy.stats import unitary_group

from linalg.operators import hermitian_eig

from .models import ENLGStrategy, QCGame, QCStrategy


def make_rng(seed):
    return np.random.Generator(np.random.Philox(seed))


def spawn_rngs(seed, count):
    """Générateurs indépendants dérivés d'une même graine."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.Philox(child)) for child in children]


def random_unitary(dim, rng):
    if dim == 1:
        return np.exp(2j * np.pi * rng.random()).reshape(1, 1)
    return np.asarray(unitary_group.rvs(dim, random_state=rng), dtype=np.complex128)


def random_pure_state(dim, rng):
    vector = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return vector / np.linalg.norm(vector)


def random_density(dim, rng, rank=None):
    """Opérateur densité de Ginibre de rang `rank` (plein par défaut)."""
    rank = dim if rank is None else rank
    ginibre = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    density = ginibre @ ginibre.conj().T
    return density / np.trace(density).real


def random_effect(dim, rng):
    """Opérateur 0 <= Q <= I de spectre uniforme dans [0, 1]."""
    unitary = random_unitary(dim, rng)
    return unitary @ np.diag(rng.random(dim)) @ unitary.conj().T


def random_projective_povm(dim, count, rng):
    """Partition aléatoire de la base canonique, conjuguée par un unitaire de Haar."""
    unitary = random_unitary(dim, rng)
    labels = rng.integers(0, count, size=dim)
    return np.stack(
        [
            unitary @ np.diag((labels == outcome).astype(float)) @ unitary.conj().T
            for outcome in range(count)
        ]
    )


def random_povm(dim, count, rng):
    """Mesure générale : G_k normalisés par S^{-1/2} avec S = Σ G_k."""
    seeds = [random_density(dim, rng) for _ in range(count)]
    values, vectors = hermitian_eig(sum(seeds))
    inverse_root = vectors @ np.diag(values ** -0.5) @ vectors.conj().T
    return np.stack([inverse_root @ seed @ inverse_root for seed in seeds])


def random_qc_game(n, s, m, rng, answers=(2, 2)):
    count_a, count_b = answers
    win_ops = np.stack(
        [np.stack([random_effect(s, rng) for _ in range(count_b)]) for _ in range(count_a)]
    )
    return QCGame(
        rho=random_density(n * s * m, rng),
        dims=(n, s, m),
        win_ops=win_ops,
        name="random",
    )


def random_qc_strategy(game, dims, rng):
    du, dv = dims
    count_a, count_b = game.answer_sets
    return QCStrategy(
        sigma=random_density(du * dv, rng),
        dims=(du, dv),
        alice_povm=random_povm(du * game.n, count_a, rng),
        bob_povm=random_povm(game.m * dv, count_b, rng),
    )


def random_enlg_strategy(game, dims, rng):
    du, dv = dims
    count_x, count_y = game.question_sets
    count_a, count_b = game.answer_sets
    return ENLGStrategy(
        sigma=random_density(du * game.ref_dim * dv, rng),
        dims=(du, game.ref_dim, dv),
        alice_povms=np.stack([random_povm(du, count_a, rng) for _ in range(count_x)]),
        bob_povms=np.stack([random_povm(dv, count_b, rng) for _ in range(count_y)]),
    )
