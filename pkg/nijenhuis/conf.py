"""
Settings for the engine, read from ``django.conf.settings``.

Values are upper-case constants in the settings module named by
``DJANGO_SETTINGS_MODULE``. Library code reads them with
``getattr(settings, 'NIJENHUIS_FOO', default)`` so an unset value falls back
to the built-in default. Without a settings module the engine configures
Django standalone with the defaults. ``override_settings`` changes values for
one run (the command line uses it for ``--max-degree``).
"""
import logging
import os

from django.conf import ENVIRONMENT_VARIABLE, settings

logger = logging.getLogger(__name__)


def setup():
    if settings.configured:
        return
    if os.environ.get(ENVIRONMENT_VARIABLE):
        logger.debug("using settings module %s", settings.SETTINGS_MODULE)
        return
    settings.configure()
    logger.debug("no %s, using built-in defaults", ENVIRONMENT_VARIABLE)


def _setting(name, default):
    setup()
    return getattr(settings, name, default)


def max_degree():
    return _setting('NIJENHUIS_MAX_DEGREE', 64)


def sample_points():
    return _setting('NIJENHUIS_SAMPLE_POINTS', 16)


def seed():
    return _setting('NIJENHUIS_SEED', 0)


def coord_bound():
    return _setting('NIJENHUIS_COORD_BOUND', 10)


def max_denominator():
    return _setting('NIJENHUIS_MAX_DENOMINATOR', 100)


def oracle_attempts():
    return _setting('NIJENHUIS_ORACLE_ATTEMPTS', 4)
