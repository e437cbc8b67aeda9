# serializers.py
import numpy as np
from rest_framework import serializers

from games.exceptions import DimensionMismatch
from games.models import ENLGStrategy, ExtendedGame, QCGame, QCStrategy


class ComplexArrayField(serializers.Field):
    """
    Tableau complexe écrit en listes imbriquées de paires [re, im], ligne par ligne.
    """

    default_error_messages = {
        "invalid": "Tableau de paires [re, im] attendu.",
        "ndim": "Tableau de dimension {expected} attendu, reçu {received}.",
        "finite": "Valeurs non finies interdites.",
    }

    def __init__(self, ndim, **kwargs):
        self.ndim = ndim
        super().__init__(**kwargs)

    def to_internal_value(self, data):
        try:
            pairs = np.asarray(data, dtype=float)
        except (TypeError, ValueError):
            self.fail("invalid")
        if pairs.ndim != self.ndim + 1 or pairs.shape[-1] != 2:
            self.fail("ndim", expected=self.ndim, received=max(pairs.ndim - 1, 0))
        if not np.all(np.isfinite(pairs)):
            self.fail("finite")
        return pairs[..., 0] + 1j * pairs[..., 1]

    def to_representation(self, value):
        value = np.asarray(value, dtype=np.complex128)
        return np.stack([value.real, value.imag], axis=-1).tolist()


class RealArrayField(serializers.Field):
    default_error_messages = {
        "invalid": "Tableau de nombres réels attendu.",
        "ndim": "Tableau de dimension {expected} attendu.",
    }

    def __init__(self, ndim, **kwargs):
        self.ndim = ndim
        super().__init__(**kwargs)

    def to_internal_value(self, data):
        try:
            values = np.asarray(data, dtype=float)
        except (TypeError, ValueError):
            self.fail("invalid")
        if values.ndim != self.ndim or not np.all(np.isfinite(values)):
            self.fail("ndim", expected=self.ndim)
        return values

    def to_representation(self, value):
        return np.asarray(value, dtype=float).tolist()


class DimsField(serializers.ListField):
    def __init__(self, length, **kwargs):
        super().__init__(
            child=serializers.IntegerField(min_value=1),
            min_length=length,
            max_length=length,
            **kwargs,
        )


# =============================================================================
# JEUX
# =============================================================================


class DomainSerializer(serializers.Serializer):
    """Construit l'objet du domaine ; une incohérence de formes est une erreur de lecture."""

    kind_value = None

    kind = serializers.CharField()
    name = serializers.CharField(required=False, allow_blank=True, default="")
    description = serializers.CharField(required=False, allow_blank=True, default="")

    def validate_kind(self, value):
        if value != self.kind_value:
            raise serializers.ValidationError(
                f"Type de document '{self.kind_value}' attendu, reçu '{value}'."
            )
        return value

    def build(self, attrs):
        raise NotImplementedError

    def validate(self, data):
        try:
            self.build(data)
        except DimensionMismatch as exc:
            raise serializers.ValidationError(str(exc))
        return data

    def create(self, validated_data):
        return self.build(validated_data)


class QCGameSerializer(DomainSerializer):
    kind_value = "qc"

    dims = DimsField(3)
    rho = ComplexArrayField(ndim=2)
    win_ops = ComplexArrayField(ndim=4)

    def build(self, attrs):
        return QCGame(
            rho=attrs["rho"],
            dims=tuple(attrs["dims"]),
            win_ops=attrs["win_ops"],
            name=attrs.get("name", ""),
            description=attrs.get("description", ""),
        )

    def to_representation(self, instance):
        return {
            "kind": self.kind_value,
            "name": instance.name,
            "description": instance.description,
            "dims": list(instance.dims),
            "rho": self.fields["rho"].to_representation(instance.rho),
            "win_ops": self.fields["win_ops"].to_representation(instance.win_ops),
        }


class ExtendedGameSerializer(DomainSerializer):
    kind_value = "enlg"

    pi = RealArrayField(ndim=2)
    ref_dim = serializers.IntegerField(min_value=1)
    ref_ops = ComplexArrayField(ndim=6)

    def build(self, attrs):
        return ExtendedGame(
            pi=attrs["pi"],
            ref_dim=attrs["ref_dim"],
            ref_ops=attrs["ref_ops"],
            name=attrs.get("name", ""),
            description=attrs.get("description", ""),
        )

    def to_representation(self, instance):
        return {
            "kind": self.kind_value,
            "name": instance.name,
            "description": instance.description,
            "pi": self.fields["pi"].to_representation(instance.pi),
            "ref_dim": instance.ref_dim,
            "ref_ops": self.fields["ref_ops"].to_representation(instance.ref_ops),
        }


# =============================================================================
# STRATÉGIES
# =============================================================================


class ReceiptSerializer(serializers.Serializer):
    source_loss = serializers.FloatField()
    target_loss = serializers.FloatField()
    scale = serializers.CharField()
    residual = serializers.FloatField(min_value=0.0)

    def to_representation(self, instance):
        return instance.as_dict()


class StrategySerializer(DomainSerializer):
    # Un fichier issu de la commande adapt porte un reçu, ignoré à la lecture.
    receipt = ReceiptSerializer(required=False)


class QCStrategySerializer(StrategySerializer):
    kind_value = "qc-strategy"

    dims = DimsField(2)
    sigma = ComplexArrayField(ndim=2)
    alice_povm = ComplexArrayField(ndim=3)
    bob_povm = ComplexArrayField(ndim=3)

    def build(self, attrs):
        return QCStrategy(
            sigma=attrs["sigma"],
            dims=tuple(attrs["dims"]),
            alice_povm=attrs["alice_povm"],
            bob_povm=attrs["bob_povm"],
            name=attrs.get("name", ""),
            description=attrs.get("description", ""),
        )

    def to_representation(self, instance):
        return {
            "kind": self.kind_value,
            "name": instance.name,
            "description": instance.description,
            "dims": list(instance.dims),
            "sigma": self.fields["sigma"].to_representation(instance.sigma),
            "alice_povm": self.fields["alice_povm"].to_representation(instance.alice_povm),
            "bob_povm": self.fields["bob_povm"].to_representation(instance.bob_povm),
        }


class ENLGStrategySerializer(StrategySerializer):
    kind_value = "enlg-strategy"

    dims = DimsField(3)
    sigma = ComplexArrayField(ndim=2)
    alice_povms = ComplexArrayField(ndim=4)
    bob_povms = ComplexArrayField(ndim=4)

    def build(self, attrs):
        return ENLGStrategy(
            sigma=attrs["sigma"],
            dims=tuple(attrs["dims"]),
            alice_povms=attrs["alice_povms"],
            bob_povms=attrs["bob_povms"],
            name=attrs.get("name", ""),
            description=attrs.get("description", ""),
        )

    def to_representation(self, instance):
        return {
            "kind": self.kind_value,
            "name": instance.name,
            "description": instance.description,
            "dims": list(instance.dims),
            "sigma": self.fields["sigma"].to_representation(instance.sigma),
            "alice_povms": self.fields["alice_povms"].to_representation(instance.alice_povms),
            "bob_povms": self.fields["bob_povms"].to_representation(instance.bob_povms),
        }


SERIALIZERS = {
    serializer.kind_value: serializer
    for serializer in (
        QCGameSerializer,
        ExtendedGameSerializer,
        QCStrategySerializer,
        ENLGStrategySerializer,
    )
}
