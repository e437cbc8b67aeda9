from dataclasses import dataclass
from math import prod

import numpy as np
import numpy.typing as npt
from django.conf import settings

from .exceptions import ShapeMismatch


# Matrice complexe dense, stockage ligne par ligne (ordre C de numpy).
ComplexMatrix = npt.NDArray[np.complex128]


@dataclass(frozen=True)
class RegisterShape:
    """
    Dimensions locales d'un tuple de registres, par ex. (U, X', X, S, Y, Y', V).
    """

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ShapeMismatch(f"Dimensions de registres invalides : {self.dims}")
        object.__setattr__(self, "dims", dims)

    def __len__(self):
        return len(self.dims)

    @property
    def total(self):
        return prod(self.dims)

    def check(self, matrix):
        if matrix.shape != (self.total, self.total):
            raise ShapeMismatch(
                f"Matrice {matrix.shape} incompatible avec les registres {self.dims}"
            )


@dataclass(frozen=True)
class NumericPolicy:
    """
    Tolérances numériques partagées par tous les modules.
    """

    hermitian_tol: float = 1e-9
    eig_tol: float = 1e-9
    psd_tol: float = 1e-9
    trace_tol: float = 1e-10
    povm_tol: float = 1e-9
    imag_tol: float = 1e-10
    eigensolver: str = "lapack"
    jacobi_max_sweeps: int = 100
    jacobi_offdiag_tol: float = 1e-12


_SETTING_KEYS = {
    "HERMITIAN_TOL": "hermitian_tol",
    "EIG_TOL": "eig_tol",
    "PSD_TOL": "psd_tol",
    "TRACE_TOL": "trace_tol",
    "POVM_TOL": "povm_tol",
    "IMAG_TOL": "imag_tol",
    "EIGENSOLVER": "eigensolver",
    "JACOBI_MAX_SWEEPS": "jacobi_max_sweeps",
    "JACOBI_OFFDIAG_TOL": "jacobi_offdiag_tol",
}


def get_policy():
    """Politique lue depuis settings.NUMERIC_POLICY (valeurs par défaut sinon)."""
    if not settings.configured:
        return NumericPolicy()
    configured = getattr(settings, "NUMERIC_POLICY", {})
    return NumericPolicy(
        **{
            field: configured[key]
            for key, field in _SETTING_KEYS.items()
            if key in configured
        }
    )
