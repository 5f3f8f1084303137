from django.apps import AppConfig


class DafConfig(AppConfig):
    name = "apps.daf"
    label = "daf"
