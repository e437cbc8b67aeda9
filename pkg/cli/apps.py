from django.apps import AppConfig


class CliConfig(AppConfig):
    name = "cli"
    verbose_name = "Interface en ligne de commande"
