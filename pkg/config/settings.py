"""
Django settings for config project.

Generated by 'django-admin startproject' using Django 5.2.1.

For more information on this file, see
https://docs.djangoproject.com/en/5.2/topics/settings/

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Pas de serveur web : la clé ne sert qu'au démarrage de Django.
SECRET_KEY = "django-insecure-nlgames-cli-only-key"

DEBUG = False

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "rest_framework",
    "linalg",
    "games",
    "construction",
    "adaptation",
    "seesaw",
    "cli",
]


# Ni authentification ni modèles : les sérialiseurs servent seulement au format des fichiers.
REST_FRAMEWORK = {
    "UNAUTHENTICATED_USER": None,
    "DEFAULT_AUTHENTICATION_CLASSES": [],
    "DEFAULT_PERMISSION_CLASSES": [],
}


# Aucune donnée n'est persistée : jeux, stratégies et rapports sont des fichiers.
DATABASES = {}


# Politique numérique globale (tolérances et solveur propre)
NUMERIC_POLICY = {
    "HERMITIAN_TOL": 1e-9,  # ‖M - M*‖ / max(1, ‖M‖), acceptation d'une matrice hermitienne
    "EIG_TOL": 1e-9,  # relatif, résidus de décomposition
    "PSD_TOL": 1e-9,  # absolu, bornes sur les valeurs propres
    "TRACE_TOL": 1e-10,
    "POVM_TOL": 1e-9,
    "IMAG_TOL": 1e-10,  # partie imaginaire tolérée sur une probabilité
    "EIGENSOLVER": "lapack",  # "lapack" (numpy) ou "jacobi"
    "JACOBI_MAX_SWEEPS": 100,
    "JACOBI_OFFDIAG_TOL": 1e-12,
}


# Valeurs par défaut de l'optimisation see-saw (surchargées par les options CLI)
SEESAW = {
    "RESTARTS": 20,
    "MAX_ROUNDS": 500,
    "IMPROVE_TOL": 1e-9,
    "SEED": 0,
    "WORKERS": 1,  # > 1 : redémarrages exécutés en parallèle (threads)
}


LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{asctime} {levelname} {name} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
            "stream": "ext://sys.stderr",
        },
    },
    "loggers": {
        "linalg": {"handlers": ["console"], "level": "WARNING"},
        "games": {"handlers": ["console"], "level": "WARNING"},
        "construction": {"handlers": ["console"], "level": "WARNING"},
        "adaptation": {"handlers": ["console"], "level": "WARNING"},
        "seesaw": {"handlers": ["console"], "level": "INFO"},
        "cli": {"handlers": ["console"], "level": "INFO"},
    },
}


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = True

USE_TZ = True
