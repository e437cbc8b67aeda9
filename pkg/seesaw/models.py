from dataclasses import dataclass, field, replace

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured

_SETTING_KEYS = {
    "RESTARTS": "restarts",
    "MAX_ROUNDS": "max_rounds",
    "IMPROVE_TOL": "improve_tol",
    "SEED": "seed",
    "WORKERS": "workers",
}

# Tolérances de certification des rapports
MONOTONE_TOL = 1e-10
CERTIFY_TOL = 1e-9


@dataclass(frozen=True)
class SeeSawConfig:
    """
    Paramètres d'une optimisation alternée. `ancilla_dims` = (dim U, dim V).
    """

    ancilla_dims: tuple[int, int] = (1, 1)
    restarts: int = 20
    max_rounds: int = 500
    improve_tol: float = 1e-9
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        dims = tuple(int(d) for d in self.ancilla_dims)
        object.__setattr__(self, "ancilla_dims", dims)
        if len(dims) != 2 or min(dims) < 1:
            raise ImproperlyConfigured(f"Dimensions d'ancilla invalides : {self.ancilla_dims}")
        if self.restarts < 1:
            raise ImproperlyConfigured("restarts doit être >= 1")
        if self.max_rounds < 1:
            raise ImproperlyConfigured("max_rounds doit être >= 1")
        if not self.improve_tol > 0:
            raise ImproperlyConfigured("improve_tol doit être > 0")
        if self.seed < 0:
            raise ImproperlyConfigured("La graine doit être un entier positif")

    @classmethod
    def from_settings(cls, **overrides):
        """Valeurs de settings.SEESAW, surchargées par les options non nulles."""
        configured = getattr(settings, "SEESAW", {}) if settings.configured else {}
        values = {
            attribute: configured[key]
            for key, attribute in _SETTING_KEYS.items()
            if key in configured
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    def with_dims(self, ancilla_dims):
        return replace(self, ancilla_dims=ancilla_dims)

    @property
    def total_dim(self):
        return self.ancilla_dims[0] * self.ancilla_dims[1]


@dataclass(frozen=True)
class RestartResult:
    value: float
    strategy: object
    history: tuple  # valeurs exactes, une par tour (tour 0 = initialisation)
    internal_value: float
    rounds: int

    @property
    def monotone(self):
        return all(
            later >= earlier - MONOTONE_TOL
            for earlier, later in zip(self.history, self.history[1:])
        )


@dataclass(frozen=True)
class SeeSawReport:
    """
    Borne inférieure certifiée : `best_value` est la probabilité de gain de
    `best_strategy` recalculée par le module des jeux.
    """

    best_value: float
    best_strategy: object
    per_restart_values: list
    rounds_used: list
    monotone_ok: bool
    seed: int
    ancilla_dims: tuple
    histories: list = field(default_factory=list, repr=False)

    @property
    def restarts_used(self):
        return len(self.per_restart_values)

    @property
    def total_rounds(self):
        return sum(self.rounds_used)

    def as_dict(self):
        return {
            "best_value": self.best_value,
            "per_restart_values": list(self.per_restart_values),
            "rounds_used": list(self.rounds_used),
            "monotone_ok": self.monotone_ok,
            "seed": self.seed,
            "ancilla_dims": list(self.ancilla_dims),
        }


@dataclass(frozen=True)
class SweepRow:
    ancilla_dims: tuple
    lower_bound: float
    restarts_used: int
    rounds: int
    wall_time_seconds: float
    report: SeeSawReport = field(default=None, repr=False, compare=False)

    @property
    def total_dim(self):
        return self.ancilla_dims[0] * self.ancilla_dims[1]


@dataclass(frozen=True)
class RelationReport:
    """
    v_G à dimension N, v_H à dimension nmN, et les deux témoins obtenus par
    adaptation des meilleures stratégies trouvées.
    """

    v_g: float
    v_h: float
    scale: int  # nm
    adapted_value: float
    backward_value: float
    qc_report: SeeSawReport = field(repr=False)
    enlg_report: SeeSawReport = field(repr=False)

    @property
    def forward_bound(self):
        """1 - (1 - v_G)/(nm), borne atteinte par la stratégie adaptée."""
        return 1.0 - (1.0 - self.v_g) / self.scale

    @property
    def backward_bound(self):
        return 1.0 - self.scale * (1.0 - self.v_h)

    @property
    def certified_v_h(self):
        return max(self.v_h, self.adapted_value)

    @property
    def holds(self):
        return self.certified_v_h >= self.forward_bound - 1e-8

    def as_dict(self):
        return {
            "v_g": self.v_g,
            "v_h": self.v_h,
            "certified_v_h": self.certified_v_h,
            "adapted_value": self.adapted_value,
            "forward_bound": self.forward_bound,
            "backward_value": self.backward_value,
            "backward_bound": self.backward_bound,
            "holds": self.holds,
        }
