"""
Application logging
~~~~~~~~~~~~~~~~~~~

:class:`InitHandler` holds records emitted before settings are loaded and
replays them once logging is configured. :class:`ColourFormatter` adds
``%(clevelname)s``, the level name coloured for a terminal.

"""

import logging

import colorama

RESET_ALL = colorama.Style.RESET_ALL


class InitHandler(logging.Handler):
    """Captures early records; warnings and above pass straight through."""

    def __init__(self, handler: logging.Handler, pass_through_level: int = logging.WARNING):
        super().__init__(logging.DEBUG)
        self.handler = handler
        self.pass_through_level = pass_through_level
        self._store: list[logging.LogRecord] = []

    def handle(self, record: logging.LogRecord) -> bool:
        self._store.append(record)
        if record.levelno >= self.pass_through_level:
            return super().handle(record)
        return False

    def replay(self):
        """Send stored records to their loggers and forget them."""
        for record in self._store:
            logger = logging.getLogger(record.name)
            if logger.isEnabledFor(record.levelno):
                logger.handle(record)
        self._store.clear()

    def emit(self, record: logging.LogRecord):
        self.handler.emit(record)


class ColourFormatter(logging.Formatter):
    """Formatter with ``%(clevelname)s`` and ``%(clevelno)s``."""

    COLOURS = {
        logging.CRITICAL: colorama.Fore.RED + colorama.Style.BRIGHT,
        logging.ERROR: colorama.Fore.RED,
        logging.WARNING: colorama.Fore.BLUE,
        logging.INFO: colorama.Fore.GREEN,
        logging.DEBUG: colorama.Fore.LIGHTBLACK_EX,
        logging.NOTSET: colorama.Fore.WHITE,
    }

    def formatMessage(self, record: logging.LogRecord) -> str:  # noqa: N802
        colour = self.COLOURS.get(record.levelno, colorama.Fore.WHITE)
        record.clevelname = f"{colour}{record.levelname}{RESET_ALL}"
        record.clevelno = f"{colour}{record.levelno}{RESET_ALL}"
        return super().formatMessage(record)
