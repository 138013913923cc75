from django.apps import AppConfig


class ConeConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'cone'
    verbose_name = 'Cone-manifold deformations of ideal triangulations'
