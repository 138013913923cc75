"""
Django settings for the conedeform project.
Hosts the `cone` app: triangulation analysis, gluing equations and the
cone-deformation solver, exposed through management commands.
"""

from pathlib import Path

from decouple import config

from cone.utils import logging_config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config(
    'SECRET_KEY',
    default='django-insecure-conedeform-local-only'  # Default for development only
)

DEBUG = config('DEBUG', default=True, cast=bool)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'rest_framework',
    'cone',
]

# Database
# Only used by the Django test runner bookkeeping; the app itself is stateless.

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Logging Configuration
LOGGING = logging_config.LOGGING_CONFIG

# Django REST Framework Configuration (serializers only, no views)
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'DEFAULT_PARSER_CLASSES': [
        'rest_framework.parsers.JSONParser',
    ],
    'UNAUTHENTICATED_USER': None,
}

# Numerical tolerances
CONE_RANK_TOLERANCE = config('CONE_RANK_TOLERANCE', default=1e-8, cast=float)
CONE_SOLVER_TOLERANCE = config('CONE_SOLVER_TOLERANCE', default=1e-12, cast=float)
CONE_FEASIBILITY_TOLERANCE = config('CONE_FEASIBILITY_TOLERANCE', default=1e-9, cast=float)
CONE_IDENTITY_TOLERANCE = config('CONE_IDENTITY_TOLERANCE', default=1e-9, cast=float)
CONE_FINITE_DIFFERENCE_STEP = config('CONE_FINITE_DIFFERENCE_STEP', default=1e-6, cast=float)

# Solver Configuration
CONE_MAX_ITERATIONS = config('CONE_MAX_ITERATIONS', default=100, cast=int)
CONE_MIN_STEP = config('CONE_MIN_STEP', default=2.0 ** -40, cast=float)
CONE_ARMIJO_FACTOR = config('CONE_ARMIJO_FACTOR', default=1e-4, cast=float)
CONE_CORRECTOR_MAX_ITERATIONS = config('CONE_CORRECTOR_MAX_ITERATIONS', default=30, cast=int)

# Verification Configuration
CONE_DEFAULT_SEED = config('CONE_DEFAULT_SEED', default=7, cast=int)
CONE_VERIFY_SAMPLES = config('CONE_VERIFY_SAMPLES', default=50, cast=int)
CONE_VERIFY_JOBS = config('CONE_VERIFY_JOBS', default=1, cast=int)
CONE_RANDOM_MAX_TETRAHEDRA = config('CONE_RANDOM_MAX_TETRAHEDRA', default=5, cast=int)

# Parametrization grid for the Table 1 positivity region
CONE_PHI0_GRID_STEP = config('CONE_PHI0_GRID_STEP', default=0.02, cast=float)
CONE_PHI0_GRID_BOX = (-1.0, 2.0, 0.0, 2.0)
CONE_PHI0_MIN_COMPONENT_CELLS = config('CONE_PHI0_MIN_COMPONENT_CELLS', default=4, cast=int)

# Report formatting
CONE_HUMAN_DIGITS = 12
