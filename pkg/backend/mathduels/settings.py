import os
from pathlib import Path

# -----------------------
# BASE
# -----------------------
BASE_DIR = Path(__file__).resolve().parent.parent

# -----------------------
# SECURITY / ENV
# -----------------------
SECRET_KEY = os.environ.get("DJANGO_SECRET_KEY", "dev-secret-key-change-me")
DEBUG = os.environ.get("DJANGO_DEBUG", "False") == "True"
ALLOWED_HOSTS = []

# -----------------------
# APPLICATIONS
# -----------------------
INSTALLED_APPS = [
    # Django
    "django.contrib.contenttypes",
    "django.contrib.auth",
    # Third-party
    "rest_framework",
    # Project apps
    "arena",
    "agents",
    "genpipe",
    "grading",
    "verification",
    "rating",
]

# -----------------------
# DATABASE
# -----------------------
# Artifacts live on disk as json/jsonl; the engine never opens a database.
DATABASES = {}

# -----------------------
# INTERNATIONALIZATION
# -----------------------
LANGUAGE_CODE = "en-us"
TIME_ZONE = os.environ.get("DJANGO_TIME_ZONE", "UTC")
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

# -----------------------
# REST FRAMEWORK (serializers only)
# -----------------------
REST_FRAMEWORK = {
    "UNAUTHENTICATED_USER": None,
    "COERCE_DECIMAL_TO_STRING": False,
}

# -----------------------
# RANKING
# -----------------------
ARENA_DEFAULT_LAMBDA = float(os.environ.get("ARENA_LAMBDA", "0.01"))
ARENA_FIT_TOLERANCE = float(os.environ.get("ARENA_FIT_TOLERANCE", "1e-8"))
ARENA_FIT_MAX_ITERATIONS = int(os.environ.get("ARENA_FIT_MAX_ITERATIONS", "500"))
ARENA_ANCHOR_RATING = float(os.environ.get("ARENA_ANCHOR_RATING", "1500"))
ARENA_WEIGHTS = (0.5, 0.5)  # (w_solve, w_author)

# -----------------------
# BOOTSTRAP
# -----------------------
ARENA_BOOTSTRAP_ITERATIONS = int(os.environ.get("ARENA_BOOTSTRAP_ITERATIONS", "10000"))
ARENA_BOOTSTRAP_ALPHA = float(os.environ.get("ARENA_BOOTSTRAP_ALPHA", "0.025"))
ARENA_BOOTSTRAP_MAX_DROP_FRACTION = 0.01

# -----------------------
# GENERATION / SOLVING / VERIFICATION
# -----------------------
ARENA_TEMPERATURE = float(os.environ.get("ARENA_TEMPERATURE", "1.0"))
ARENA_AMPLIFICATION_ROUNDS = int(os.environ.get("ARENA_AMPLIFICATION_ROUNDS", "1"))
ARENA_PIPELINE_STAGES = int(os.environ.get("ARENA_PIPELINE_STAGES", "3"))
ARENA_VERIFIER_SAMPLES = int(os.environ.get("ARENA_VERIFIER_SAMPLES", "1"))
ARENA_VERIFIER_ESCALATION_SAMPLES = int(os.environ.get("ARENA_VERIFIER_ESCALATION_SAMPLES", "3"))
ARENA_PARALLELISM = int(os.environ.get("ARENA_PARALLELISM", "4"))

# -----------------------
# ENDPOINTS
# -----------------------
ARENA_ENDPOINT_TIMEOUT = float(os.environ.get("ARENA_ENDPOINT_TIMEOUT", "300"))
ARENA_ENDPOINT_MAX_RETRIES = int(os.environ.get("ARENA_ENDPOINT_MAX_RETRIES", "3"))
ARENA_ENDPOINT_BACKOFF = float(os.environ.get("ARENA_ENDPOINT_BACKOFF", "1.0"))

# -----------------------
# LOGGING (basic)
# -----------------------
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(asctime)s %(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {"console": {"class": "logging.StreamHandler", "formatter": "plain"}},
    "root": {"handlers": ["console"], "level": os.environ.get("ARENA_LOG_LEVEL", "INFO")},
}
