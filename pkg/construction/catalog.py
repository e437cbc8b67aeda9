# catalog.py - Jeux de référence prêts à l'emploi (commande `catalog`, option --catalog)
import numpy as np

from games.models import ExtendedGame
from linalg.operators import kron, projector

from .builders import weyl_basis


def _gamma(sign):
    """|γ_c> = (1/√2)|00> ± (1/2)|11> ± (1/2)|22> sur C³⊗C³."""
    vector = np.zeros(9, dtype=np.complex128)
    vector[0] = 1.0 / np.sqrt(2.0)
    vector[4] = sign * 0.5
    vector[8] = sign * 0.5
    return vector


GAMMA = (_gamma(1.0), _gamma(-1.0))


def build_rv_game(scaled=True):
    """
    Jeu étendu à réponses binaires sur R = C³⊗C³, 81 paires de questions.

    L'arbitre calcule c = a xor b ; l'opérateur perdant est le projecteur
    (U_x⊗U_y)|γ_c><γ_c|(U_x⊗U_y)*, déjà multiplié par deux. `scaled=False`
    rend la moitié de ce projecteur.
    """
    ops = weyl_basis(3).ops
    weight = 1.0 if scaled else 0.5
    identity = np.eye(9)
    ref_ops = np.empty((2, 2, 9, 9, 9, 9), dtype=np.complex128)
    for x, u in enumerate(ops):
        for y, v in enumerate(ops):
            unitary = kron(u, v)
            for c, gamma in enumerate(GAMMA):
                losing = weight * projector(unitary @ gamma)
                for a in range(2):
                    ref_ops[a, a ^ c, x, y] = identity - losing
    return ExtendedGame(
        pi=np.full((9, 9), 1.0 / 81.0),
        ref_dim=9,
        ref_ops=ref_ops,
        name="rv" if scaled else "rv-unscaled",
        description="Jeu étendu XOR sur C3⊗C3 avec opérateurs de Weyl",
    )


def embed_nonlocal_game(pi, predicate, answers=(2, 2), name="", description=""):
    """Jeu non local classique vu comme jeu étendu avec un registre R trivial."""
    pi = np.asarray(pi, dtype=float)
    count_a, count_b = answers
    count_x, count_y = pi.shape
    ref_ops = np.zeros((count_a, count_b, count_x, count_y, 1, 1), dtype=np.complex128)
    for a in range(count_a):
        for b in range(count_b):
            for x in range(count_x):
                for y in range(count_y):
                    ref_ops[a, b, x, y, 0, 0] = 1.0 if predicate(a, b, x, y) else 0.0
    return ExtendedGame(
        pi=pi, ref_dim=1, ref_ops=ref_ops, name=name, description=description
    )


def chsh_game():
    return embed_nonlocal_game(
        np.full((2, 2), 0.25),
        lambda a, b, x, y: (a ^ b) == (x & y),
        name="chsh",
        description="CHSH : a xor b = x et y, questions uniformes",
    )


CATALOG = {
    "rv": build_rv_game,
    "rv-unscaled": lambda: build_rv_game(scaled=False),
    "chsh": chsh_game,
}


def catalog_game(name):
    try:
        builder = CATALOG[name]
    except KeyError:
        raise KeyError(f"Jeu inconnu : {name} (disponibles : {', '.join(sorted(CATALOG))})")
    return builder()
