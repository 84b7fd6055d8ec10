from django.apps import AppConfig


class GenpipeConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'genpipe'
