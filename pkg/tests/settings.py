# Settings used by runtests.py. The values match the built-in defaults
# except for a smaller oracle sample.

DATABASES = {}
INSTALLED_APPS = ()

NIJENHUIS_MAX_DEGREE = 64
NIJENHUIS_SAMPLE_POINTS = 4
NIJENHUIS_SEED = 0
NIJENHUIS_COORD_BOUND = 10
NIJENHUIS_MAX_DENOMINATOR = 100
NIJENHUIS_ORACLE_ATTEMPTS = 4
