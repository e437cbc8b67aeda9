from django.apps import AppConfig


class SeesawConfig(AppConfig):
    name = "seesaw"
    verbose_name = "Optimisation see-saw"
