"""Settings every configuration starts from (logging and self-test plumbing)."""

from .typed_settings import SettingsDef


class LoggingSettings(SettingsDef):
    """Logging configuration."""

    LOGGING: dict[str, dict] = {}
    """
    ``logging.config.dictConfig`` configuration merged over the built in one::

        LOGGING = {
            "formatters": {"default": {"format": "%(asctime)s | %(levelname)s | %(name)s | %(message)s"}},
            "handlers": {"console": {"class": "logging.StreamHandler", "formatter": "default"}},
            "root": {"handlers": ["console"]},
        }

    """

    LOG_HANDLERS: dict[str, dict] = {}
    """
    Extra handlers merged into ``LOGGING``; all are attached to the root logger
    unless ``"non_root": True`` is given::

        LOG_HANDLERS = {"file": {"class": "logging.FileHandler", "filename": "run.log"}}

    """

    LOG_LOGGERS: dict[str, dict] = {}
    """
    Extra loggers merged into ``LOGGING``::

        LOG_LOGGERS = {"layoutbench.solvers": {"level": "DEBUG"}}

    """


class ChecksSettings(SettingsDef):
    """Self-test settings."""

    CHECK_LOCATIONS: list[str] = []
    """Modules imported before ``selftest`` runs so their checks are registered."""
