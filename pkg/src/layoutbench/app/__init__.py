"""
Application
~~~~~~~~~~~

The command line application object: parses arguments, loads settings,
configures logging and dispatches to a command::

    >>> from layoutbench.app import CliApplication

    >>> app = CliApplication(prog="layoutbench")

    >>> @app.command
    ... def hello(*, loud: bool):
    ...     print("HELLO" if loud else "hello")

    >>> app.dispatch(["hello", "--loud"])

Exit codes
----------

=====  ===========================================================
0      success
1      usage error (bad arguments or no command)
2      data or validation error (any ``LayoutBenchError``, invalid
       configuration, failed solves or verifications)
3      internal invariant failure or unexpected exception
130    interrupted
=====  ===========================================================

.. automodule:: layoutbench.app.arguments

.. automodule:: layoutbench.app.argument_types

.. automodule:: layoutbench.app.argument_actions

"""

import argparse
import logging.config
import os
import sys
from argparse import Namespace as CommandOptions
from collections.abc import Sequence

import argcomplete
import colorama

from .. import conf
from ..conf.base_settings import LoggingSettings
from ..exceptions import ApplicationExit, InvalidConfiguration, InvariantViolation, LayoutBenchError
from .arguments import Arg, ArgumentType, CommandGroup, argument
from .log import ColourFormatter, InitHandler

__all__ = (
    "EXIT_DATA_ERROR",
    "EXIT_INTERNAL_ERROR",
    "EXIT_INTERRUPTED",
    "EXIT_USAGE",
    "Arg",
    "ArgumentType",
    "CliApplication",
    "CommandOptions",
    "argument",
)

logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_DATA_ERROR = 2
EXIT_INTERNAL_ERROR = 3
EXIT_INTERRUPTED = 130


class UsageErrorParser(argparse.ArgumentParser):
    """Argument parser reporting usage errors with exit code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _key_help(key: str) -> str:
    if key in os.environ:
        return f"{key} [{os.environ[key]}]"
    return key


class CliApplication(CommandGroup):
    """Command line application.

    :param prog: Program name shown in help.
    :param description: Shown by ``--help``.
    :param version: Reported by ``--version``.
    :param application_settings: Module holding default settings.

    """

    default_log_handler = logging.StreamHandler(sys.stderr)

    default_log_formatter = logging.Formatter("%(asctime)s | %(levelname)s | %(name)s | %(message)s")

    default_color_log_formatter = ColourFormatter(
        f"{colorama.Fore.YELLOW}%(asctime)s{colorama.Fore.RESET} "
        f"%(clevelname)s "
        f"{colorama.Fore.LIGHTBLUE_EX}%(name)s{colorama.Fore.RESET} "
        f"%(message)s"
    )

    env_settings_key = conf.DEFAULT_ENV_KEY
    env_loglevel_key = "LAYOUTBENCH_LOGLEVEL"

    def __init__(
        self,
        *,
        prog: str | None = None,
        description: str | None = None,
        epilog: str | None = None,
        version: str = "Unknown",
        application_settings: str | None = "layoutbench.default_settings",
    ):
        super().__init__(
            UsageErrorParser(
                prog,
                description=description,
                epilog=epilog,
                formatter_class=argparse.RawDescriptionHelpFormatter,
            )
        )
        self.application_version = version
        self.application_settings = application_settings

        self._init_logger = InitHandler(self.default_log_handler)
        self.pre_configure_logging()
        self._init_parser()
        self.register_builtin_handlers()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.application_name!r})"

    def __str__(self) -> str:
        return self.application_summary

    @property
    def application_name(self) -> str:
        return self.parser.prog

    @property
    def application_summary(self) -> str:
        description = self.parser.description
        if description:
            return f"{self.application_name} version {self.application_version} - {description}"
        return f"{self.application_name} version {self.application_version}"

    def _init_parser(self):
        self.argument(
            "--settings",
            help="Settings source; a Python module, settings URL or .json/.yaml/.toml file. "
            f"Defaults to the env variable: {_key_help(self.env_settings_key)}",
        )
        self.argument(
            "--version",
            action="version",
            version=f"%(prog)s version: {self.application_version}",
        )
        self.argument(
            "--nocolor",
            "--nocolour",
            dest="no_color",
            action="store_true",
            help="Disable colour output.",
        )

        group = self.argument_group(title="logging arguments", description="Customise log output")
        group.add_argument(
            "--log-level",
            default=os.environ.get(self.env_loglevel_key, "DEFAULT"),
            choices=("DEBUG", "INFO", "WARN", "ERROR", "CRITICAL"),
            help=f"Log level. Defaults to env variable: {_key_help(self.env_loglevel_key)}",
        )
        group.add_argument(
            "--log-color",
            "--log-colour",
            dest="log_color",
            default=None,
            action="store_true",
            help="Force coloured log output.",
        )
        group.add_argument(
            "--log-nocolor",
            "--log-nocolour",
            dest="log_color",
            action="store_false",
            help="Disable coloured log output.",
        )

    def register_builtin_handlers(self):
        @self.command(name="settings")
        def settings_report(opts: CommandOptions):
            """Report the effective settings."""
            from ..conf.report import SettingsReport

            SettingsReport(no_color=opts.no_color).run()

    def pre_configure_logging(self):
        """Capture records until settings (and therefore logging config) are loaded."""
        self.default_log_handler.formatter = self.default_log_formatter
        logging.root.setLevel(logging.DEBUG)
        logging.root.handlers = [self._init_logger]

    def configure_settings(self, opts: CommandOptions):
        conf.settings.configure(
            [self.application_settings] if self.application_settings else [],
            opts.settings,
            env_settings_key=self.env_settings_key,
        )

    def get_log_formatter(self, log_color: bool | None) -> logging.Formatter:
        handler = self.default_log_handler
        if log_color is None and hasattr(handler.stream, "isatty"):
            log_color = handler.stream.isatty()
        return self.default_color_log_formatter if log_color else self.default_log_formatter

    @staticmethod
    def _apply_logging_settings():
        dict_config = dict(LoggingSettings.LOGGING or {})
        if LoggingSettings.LOG_HANDLERS:
            handlers = dict_config.setdefault("handlers", {})
            root = dict_config.setdefault("root", {}).setdefault("handlers", [])
            for name, handler in LoggingSettings.LOG_HANDLERS.items():
                handler = dict(handler)
                if not handler.pop("non_root", False):
                    root.append(name)
                handlers[name] = handler
        if LoggingSettings.LOG_LOGGERS:
            dict_config.setdefault("loggers", {}).update(LoggingSettings.LOG_LOGGERS)

        if dict_config:
            dict_config.setdefault("version", 1)
            dict_config.setdefault("disable_existing_loggers", False)
            logging.config.dictConfig(dict_config)

    def configure_logging(self, opts: CommandOptions):
        if not hasattr(self, "_init_logger"):
            return
        self.default_log_handler.formatter = self.get_log_formatter(opts.log_color)
        logging.root.handlers = [self.default_log_handler]
        self._apply_logging_settings()

        level = opts.log_level
        if level == "DEFAULT":
            level = getattr(self.resolve_handler(opts), "loglevel", logging.INFO)
        logging.root.setLevel(level)

        self._init_logger.replay()
        del self._init_logger

    def exception_report(self, exception: BaseException, opts: CommandOptions) -> int:
        """Log an exception raised by a command and pick the exit code."""
        if isinstance(exception, (LayoutBenchError, InvalidConfiguration)):
            logger.error("%s", exception)
            return EXIT_DATA_ERROR
        if isinstance(exception, InvariantViolation):
            logger.error("Invariant violated: %s", exception)
            return EXIT_INTERNAL_ERROR
        logger.exception(
            "Un-handled exception %s caught executing command: %s",
            exception,
            getattr(opts, self.handler_dest, None),
        )
        return EXIT_INTERNAL_ERROR

    def dispatch(self, args: Sequence[str] | None = None) -> None:
        """Parse ``args`` and run the selected command; exits with its status."""
        argcomplete.autocomplete(self.parser)
        opts = self.parser.parse_args(args)

        try:
            self.configure_settings(opts)
            self.configure_logging(opts)
            logger.debug("Starting %s", self.application_summary)
            exit_code = self.dispatch_handler(opts)

        except ApplicationExit as ex:
            if ex.message:
                print(f"\n\n{ex.message}", file=sys.stderr)
            raise

        except KeyboardInterrupt:
            print("\n\nInterrupted.", file=sys.stderr)
            sys.exit(EXIT_INTERRUPTED)

        except Exception as ex:  # noqa: BLE001
            if hasattr(self, "_init_logger"):
                self._init_logger.replay()
            sys.exit(self.exception_report(ex, opts))

        else:
            if exit_code:
                sys.exit(exit_code)

        finally:
            logging.shutdown()
