from django.apps import AppConfig


class JitterConfig(AppConfig):
    name = "apps.jitter"
    label = "jitter"
