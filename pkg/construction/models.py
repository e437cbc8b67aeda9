from dataclasses import dataclass

import numpy as np


def _frozen(value):
    array = np.array(value, dtype=np.complex128, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class WeylBasis:
    """
    Base orthogonale de d² unitaires W_(j,k) = Shift^j Clock^k, indice plat j*d + k.
    """

    d: int
    ops: np.ndarray  # forme (d², d, d)

    def __post_init__(self):
        object.__setattr__(self, "ops", _frozen(self.ops))

    def __len__(self):
        return len(self.ops)

    def __getitem__(self, index):
        return self.ops[index]


@dataclass(frozen=True)
class MaxEntangledState:
    """(1/√n) Σ_j |j>|j>, en vecteur colonne de longueur n²."""

    n: int
    vector: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vector", _frozen(self.vector))

    def density(self):
        return np.outer(self.vector, self.vector.conj())


@dataclass(frozen=True)
class ReducedOps:
    """ξ = Tr_S(ρ) et ξ_{a,b} = Tr_S[(I ⊗ Q_{a,b} ⊗ I) ρ] sur X⊗Y."""

    xi: np.ndarray
    xi_ab: np.ndarray  # forme (|A|, |B|, nm, nm)

    def __post_init__(self):
        object.__setattr__(self, "xi", _frozen(self.xi))
        object.__setattr__(self, "xi_ab", _frozen(self.xi_ab))
