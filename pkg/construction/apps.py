from django.apps import AppConfig


class ConstructionConfig(AppConfig):
    name = "construction"
    verbose_name = "Construction G -> H et catalogue"
