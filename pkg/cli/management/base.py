# base.py - Commande de base : résumé JSON sur la première ligne et codes de sortie
import json
import logging

from django.core.exceptions import ImproperlyConfigured
from django.core.management.base import BaseCommand, CommandError

from games.exceptions import (
    CertificationFailed,
    DimensionMismatch,
    GameError,
    InvalidDimension,
    UnsupportedAnswerAlphabet,
    ValidationFailed,
)
from linalg.exceptions import LinalgError

from ..exceptions import FileFormatError

logger = logging.getLogger(__name__)

# Codes de sortie (contrat stable pour les scripts)
EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_DIMENSION = 4
EXIT_RESIDUAL = 5
EXIT_UNSUPPORTED = 6


def summary_line(summary):
    return json.dumps(summary, sort_keys=True, separators=(",", ":"))


class DomainCommand(BaseCommand):
    """
    Chaque commande implémente `run(**options)` et rend son résumé JSON
    et les lignes lisibles qui le suivent.
    Les exceptions du domaine deviennent un résumé d'erreur suivi d'une
    CommandError portant le code de sortie.
    """

    def handle(self, *args, **options):
        try:
            summary, lines = self.run(**options)
        except FileFormatError as exc:
            self.fail(EXIT_PARSE, str(exc), path=exc.path)
        except ImproperlyConfigured as exc:
            self.fail(EXIT_PARSE, str(exc))
        except ValidationFailed as exc:
            self.fail(
                EXIT_VALIDATION,
                str(exc),
                lines=[str(violation) for violation in exc.report.violations],
                report=exc.report.as_dict(),
            )
        except DimensionMismatch as exc:
            self.fail(
                EXIT_DIMENSION, str(exc), expected=exc.expected, received=exc.received
            )
        except InvalidDimension as exc:
            self.fail(EXIT_DIMENSION, str(exc))
        except CertificationFailed as exc:
            self.fail(EXIT_RESIDUAL, str(exc))
        except UnsupportedAnswerAlphabet as exc:
            self.fail(EXIT_UNSUPPORTED, str(exc))
        except (GameError, LinalgError) as exc:
            # probabilité non réelle ou échec numérique
            self.fail(EXIT_VALIDATION, str(exc))
        self.emit(summary, *lines)

    def run(self, **options):
        raise NotImplementedError

    def emit(self, summary, *lines):
        self.stdout.write(
            summary_line(
                {"command": self.command_name, "status": "ok", "exit_code": EXIT_OK, **summary}
            )
        )
        for line in lines:
            self.stdout.write(line)

    def fail(self, code, message, lines=(), **details):
        """Résumé d'erreur sur stdout puis sortie avec `code`."""
        details = {key: value for key, value in details.items() if value is not None}
        self.stdout.write(
            summary_line(
                {
                    "command": self.command_name,
                    "status": "error",
                    "exit_code": code,
                    "error": message,
                    **details,
                }
            )
        )
        for line in lines:
            self.stdout.write(line)
        logger.warning("%s : sortie %d (%s)", self.command_name, code, message)
        raise CommandError(message, returncode=code)

    @property
    def command_name(self):
        return self.__module__.rsplit(".", 1)[-1]
