from dataclasses import dataclass
from fractions import Fraction

# Écart maximal toléré entre la perte obtenue et la perte attendue.
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class AdaptationReceipt:
    """
    Reçu d'adaptation : pertes source et cible, facteur d'échelle exact
    (1/(nm) dans le sens QC -> étendu, nm dans l'autre) et résidu
    |target_loss - scale * source_loss|.
    """

    source_loss: float
    target_loss: float
    scale: Fraction
    residual: float

    @classmethod
    def from_losses(cls, source_loss, target_loss, scale):
        scale = Fraction(scale)
        residual = abs(target_loss - float(scale) * source_loss)
        return cls(float(source_loss), float(target_loss), scale, float(residual))

    @property
    def expected_target_loss(self):
        return float(self.scale) * self.source_loss

    @property
    def ok(self):
        return self.residual <= RESIDUAL_TOL

    def as_dict(self):
        return {
            "source_loss": self.source_loss,
            "target_loss": self.target_loss,
            "scale": str(self.scale),
            "residual": self.residual,
        }
