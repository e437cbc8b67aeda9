from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionMismatch


def _frozen(value, dtype=np.complex128):
    array = np.array(value, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


def _require_square(name, array, size):
    if array.shape != (size, size):
        raise DimensionMismatch(
            f"{name} doit être {size}x{size}, reçu {array.shape}",
            expected=(size, size),
            received=array.shape,
        )


@dataclass(frozen=True)
class QCGame:
    """
    Jeu quantique-classique : état rho sur X⊗S⊗Y et opérateurs gagnants Q_{a,b} sur S.

    Les ensembles de réponses A et B sont indexés à partir de 0.
    """

    rho: np.ndarray
    dims: tuple[int, int, int]  # (n, s, m)
    win_ops: np.ndarray  # forme (|A|, |B|, s, s)
    name: str = ""
    description: str = ""

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 3 or min(dims) < 1:
            raise DimensionMismatch(f"Dimensions (n, s, m) invalides : {self.dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "rho", _frozen(self.rho))
        object.__setattr__(self, "win_ops", _frozen(self.win_ops))

        n, s, m = dims
        _require_square("rho", self.rho, n * s * m)
        if self.win_ops.ndim != 4 or self.win_ops.shape[2:] != (s, s):
            raise DimensionMismatch(
                f"win_ops doit avoir la forme (|A|, |B|, {s}, {s}), reçu {self.win_ops.shape}"
            )

    @property
    def n(self):
        return self.dims[0]

    @property
    def s(self):
        return self.dims[1]

    @property
    def m(self):
        return self.dims[2]

    @property
    def answer_sets(self):
        return self.win_ops.shape[:2]

    def win_op(self, a, b):
        return self.win_ops[a, b]


@dataclass(frozen=True)
class ExtendedGame:
    """
    Jeu non local étendu : distribution pi sur X×Y et opérateurs P_{a,b,x,y} sur R.
    """

    pi: np.ndarray  # forme (|X|, |Y|)
    ref_dim: int
    ref_ops: np.ndarray  # forme (|A|, |B|, |X|, |Y|, r, r)
    name: str = ""
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "pi", _frozen(self.pi, dtype=float))
        object.__setattr__(self, "ref_ops", _frozen(self.ref_ops))
        object.__setattr__(self, "ref_dim", int(self.ref_dim))

        if self.pi.ndim != 2:
            raise DimensionMismatch(f"pi doit être une matrice |X|x|Y|, reçu {self.pi.shape}")
        r = self.ref_dim
        expected = (*self.pi.shape, r, r)
        if self.ref_ops.ndim != 6 or self.ref_ops.shape[2:] != expected:
            raise DimensionMismatch(
                f"ref_ops doit avoir la forme (|A|, |B|, {expected}), reçu {self.ref_ops.shape}"
            )

    @property
    def question_sets(self):
        return self.pi.shape

    @property
    def answer_sets(self):
        return self.ref_ops.shape[:2]

    def ref_op(self, a, b, x, y):
        return self.ref_ops[a, b, x, y]


@dataclass(frozen=True)
class QCStrategy:
    """
    Stratégie intriquée pour un jeu QC : sigma sur U⊗V, mesures {A_a} sur U⊗X
    et {B_b} sur Y⊗V.
    """

    sigma: np.ndarray
    dims: tuple[int, int]  # (dim U, dim V)
    alice_povm: np.ndarray  # forme (|A|, dU*n, dU*n)
    bob_povm: np.ndarray  # forme (|B|, m*dV, m*dV)
    name: str = ""
    description: str = ""

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 2 or min(dims) < 1:
            raise DimensionMismatch(f"Dimensions (dim U, dim V) invalides : {self.dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "sigma", _frozen(self.sigma))
        object.__setattr__(self, "alice_povm", _frozen(self.alice_povm))
        object.__setattr__(self, "bob_povm", _frozen(self.bob_povm))

        du, dv = dims
        _require_square("sigma", self.sigma, du * dv)
        for name, povm, ancilla in (
            ("alice_povm", self.alice_povm, du),
            ("bob_povm", self.bob_povm, dv),
        ):
            if povm.ndim != 3 or povm.shape[1] != povm.shape[2] or povm.shape[1] % ancilla:
                raise DimensionMismatch(
                    f"{name} de forme {povm.shape} incompatible avec l'ancilla {ancilla}"
                )

    @property
    def question_dims(self):
        """(n, m) attendus par les mesures."""
        return (
            self.alice_povm.shape[1] // self.dims[0],
            self.bob_povm.shape[1] // self.dims[1],
        )

    @property
    def total_dim(self):
        return self.dims[0] * self.dims[1]


@dataclass(frozen=True)
class ENLGStrategy:
    """
    Stratégie intriquée pour un jeu étendu : sigma sur U⊗R⊗V, mesures {A^x_a}
    sur U et {B^y_b} sur V.
    """

    sigma: np.ndarray
    dims: tuple[int, int, int]  # (dim U, dim R, dim V)
    alice_povms: np.ndarray  # forme (|X|, |A|, dU, dU)
    bob_povms: np.ndarray  # forme (|Y|, |B|, dV, dV)
    name: str = ""
    description: str = ""

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 3 or min(dims) < 1:
            raise DimensionMismatch(f"Dimensions (dim U, dim R, dim V) invalides : {self.dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "sigma", _frozen(self.sigma))
        object.__setattr__(self, "alice_povms", _frozen(self.alice_povms))
        object.__setattr__(self, "bob_povms", _frozen(self.bob_povms))

        du, r, dv = dims
        _require_square("sigma", self.sigma, du * r * dv)
        if self.alice_povms.ndim != 4 or self.alice_povms.shape[2:] != (du, du):
            raise DimensionMismatch(f"alice_povms de forme {self.alice_povms.shape} invalide")
        if self.bob_povms.ndim != 4 or self.bob_povms.shape[2:] != (dv, dv):
            raise DimensionMismatch(f"bob_povms de forme {self.bob_povms.shape} invalide")

    @property
    def total_dim(self):
        return self.dims[0] * self.dims[2]


@dataclass(frozen=True)
class WinProbability:
    """
    Probabilité de gain : `raw` est la valeur exacte (résidus compris),
    `value` la valeur bornée à [0, 1] pour l'affichage.
    """

    raw: float

    @property
    def value(self):
        return min(1.0, max(0.0, self.raw))

    @property
    def loss(self):
        return 1.0 - self.raw

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    index: tuple = ()
    residual: float = 0.0

    def __str__(self):
        where = f" {self.index}" if self.index else ""
        return f"[{self.code}{where}] {self.message} (résidu {self.residual:.3e})"


@dataclass
class ValidationReport:
    """Liste des invariants violés ; vide si et seulement si tout est valide."""

    subject: str
    violations: list = field(default_factory=list)

    def add(self, code, message, index=(), residual=0.0):
        self.violations.append(Violation(code, message, tuple(index), float(residual)))

    @property
    def ok(self):
        return not self.violations

    def __len__(self):
        return len(self.violations)

    def codes(self):
        return [violation.code for violation in self.violations]

    def as_dict(self):
        return {
            "subject": self.subject,
            "ok": self.ok,
            "violations": [
                {
                    "code": v.code,
                    "message": v.message,
                    "index": list(v.index),
                    "residual": v.residual,
                }
                for v in self.violations
            ],
        }

    def __str__(self):
        if self.ok:
            return f"{self.subject} : valide"
        return f"{self.subject} : " + "; ".join(str(v) for v in self.violations)
