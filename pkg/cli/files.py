# files.py - Lecture et écriture des documents JSON (jeux et stratégies)
import json
from pathlib import Path

from construction.catalog import CATALOG, catalog_game
from games.models import ENLGStrategy, ExtendedGame, QCGame, QCStrategy
from games.validators import (
    ensure_valid,
    validate_enlg,
    validate_enlg_strategy,
    validate_qc_game,
    validate_qc_strategy,
)

from .exceptions import FileFormatError
from .serializers import (
    SERIALIZERS,
    ENLGStrategySerializer,
    ExtendedGameSerializer,
    QCGameSerializer,
    QCStrategySerializer,
    ReceiptSerializer,
)

GAME_KINDS = ("qc", "enlg")
STRATEGY_KINDS = ("qc-strategy", "enlg-strategy")

_SERIALIZER_FOR_TYPE = {
    QCGame: QCGameSerializer,
    ExtendedGame: ExtendedGameSerializer,
    QCStrategy: QCStrategySerializer,
    ENLGStrategy: ENLGStrategySerializer,
}


# =============================================================================
# LECTURE
# =============================================================================


def read_document(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FileFormatError(path, f"lecture impossible ({exc.strerror or exc})")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(path, f"JSON invalide ligne {exc.lineno}, colonne {exc.colno}")
    if not isinstance(data, dict):
        raise FileFormatError(path, "un objet JSON est attendu")
    return data


def parse_document(path, kinds):
    """
    Objet du domaine décrit par le fichier, sans vérification des invariants
    (positivité, complétude). Seules les erreurs de structure sont levées ici.
    """
    data = read_document(path)
    kind = data.get("kind")
    if kind not in kinds:
        raise FileFormatError(
            path, f"type '{kind}' inattendu, attendu l'un de {', '.join(kinds)}"
        )
    serializer = SERIALIZERS[kind](data=data)
    if not serializer.is_valid():
        raise FileFormatError(path, "; ".join(_error_messages(serializer.errors)))
    return serializer.save()


def _error_messages(errors, prefix=""):
    """Aplatit les erreurs imbriquées d'un serializer DRF."""
    if isinstance(errors, dict):
        for key, value in errors.items():
            label = prefix if key == "non_field_errors" else f"{prefix}{key}."
            yield from _error_messages(value, label)
    elif isinstance(errors, list):
        for value in errors:
            yield from _error_messages(value, prefix)
    else:
        yield f"{prefix.rstrip('.')}: {errors}" if prefix else str(errors)


def validation_report(obj, game=None):
    """Rapport de validation adapté au type de l'objet chargé."""
    if isinstance(obj, QCGame):
        return validate_qc_game(obj)
    if isinstance(obj, ExtendedGame):
        return validate_enlg(obj)
    if isinstance(obj, QCStrategy):
        return validate_qc_strategy(obj, game)
    return validate_enlg_strategy(obj, game)


def load_game(path, kinds=GAME_KINDS):
    game = parse_document(path, kinds)
    ensure_valid(validation_report(game))
    return game


def load_catalog_game(name):
    if name not in CATALOG:
        raise FileFormatError(name, f"jeu inconnu du catalogue ({', '.join(sorted(CATALOG))})")
    return catalog_game(name)


def load_strategy(path, kinds=STRATEGY_KINDS):
    strategy = parse_document(path, kinds)
    ensure_valid(validation_report(strategy))
    return strategy


# =============================================================================
# ÉCRITURE
# =============================================================================


def dump_document(data):
    """Forme canonique : clés triées, séparateurs compacts, une ligne."""
    return json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n"


def document(obj):
    return dict(_SERIALIZER_FOR_TYPE[type(obj)](obj).data)


def strategy_document(strategy, receipt=None):
    data = document(strategy)
    if receipt is not None:
        data["receipt"] = dict(ReceiptSerializer(receipt).data)
    return data


def write_document(path, data):
    Path(path).write_text(dump_document(data), encoding="utf-8")
