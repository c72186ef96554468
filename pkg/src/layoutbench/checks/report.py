"""
Checks Report
~~~~~~~~~~~~~

Runs the registered checks and writes a report.

"""

import csv
import logging
import sys
from collections.abc import Sequence
from typing import Any, TextIO

from colorama import Back, Fore, Style

from ..utils import wrap_text
from .registry import Check, CheckMessage, CheckRegistry, import_checks, registry

__all__ = ("BaseReport", "CheckReport", "TabularCheckReport", "execute_report")

COLOURS = {
    # Level: (Title, Border)
    logging.CRITICAL: (Fore.WHITE + Back.RED, Fore.RED),
    logging.ERROR: (Fore.RED, Fore.RED),
    logging.WARNING: (Fore.YELLOW, Fore.YELLOW),
    logging.INFO: (Fore.CYAN, Fore.CYAN),
    logging.DEBUG: (Fore.MAGENTA, Fore.MAGENTA),
}


def get_check_name(check: Any) -> str:
    return getattr(check, "check_name", check.__name__)


class BaseReport:
    """Common base class of reports."""

    def __init__(self, f_out: TextIO = sys.stdout, check_registry: CheckRegistry = registry):
        self.f_out = f_out
        self.registry = check_registry

    def render_header(self):
        pass

    def render_result_prefix(self, check: Check):
        pass

    def render_result(self, check: Check, message: CheckMessage | None):
        pass

    def render_result_suffix(self, check: Check, message_shown: bool):
        pass

    def render_footer(self, checks: int, serious: int):
        pass

    def run(self, message_level: int = logging.INFO, tags: Sequence[str] | None = None) -> bool:
        """
        Run the report

        :param message_level: Lowest level of message displayed.
        :param tags: Only run checks carrying one of these tags.
        :return: ``True`` if any message was at ERROR or above.

        """
        checks = serious = 0

        self.render_header()

        for check, messages in self.registry.run_checks_iter(tags, self.render_result_prefix):
            checks += 1
            message_shown = False
            for message in messages:
                if message.is_serious():
                    serious += 1
                if message.level >= message_level:
                    message_shown = True
                    self.render_result(check, message)

            if not message_shown:
                self.render_result(check, None)

            self.render_result_suffix(check, message_shown)

        self.render_footer(checks, serious)

        return bool(serious)


class CheckReport(BaseReport):
    """Dots for passing checks, a boxed block per finding."""

    width = 80

    def __init__(
        self,
        verbose: bool = False,
        no_color: bool = False,
        header: str | None = None,
        f_out: TextIO = sys.stdout,
        check_registry: CheckRegistry = registry,
    ):
        self.verbose = verbose
        self.no_color = no_color
        self.header = header
        super().__init__(f_out, check_registry)

        if self.no_color:
            self.verbose_check_template = "+ {name}\n"
            self.title_template = " {level}: {title}"
            self.hint_template = ("-" * self.width) + "\n HINT: {hint}\n"
            self.message_template = f"{'=' * self.width}\n{{title}}\n{{hint}}{'=' * self.width}\n\n"
        else:
            self.verbose_check_template = f"{Fore.YELLOW}+ {Fore.CYAN}{{name}}{Style.RESET_ALL}\n"
            self.title_template = (
                f"{{style}} {Style.BRIGHT}{{level:7s}}{Style.NORMAL} {{title}}{Style.RESET_ALL}"
            )
            self.hint_template = (
                f"{{border_style}}{'-' * self.width}{Style.RESET_ALL}\n "
                f"{Style.BRIGHT}HINT:{Style.DIM} {Fore.WHITE}{{hint}}{Style.RESET_ALL}\n"
            )
            self.message_template = (
                f"{{border_style}}{'=' * self.width}{Style.RESET_ALL}\n"
                f"{{title}}\n{{hint}}"
                f"{{border_style}}{'=' * self.width}{Style.RESET_ALL}\n\n"
            )

    def render_header(self):
        if self.header and self.verbose:
            self.f_out.write(self.header + "\n")

    def render_result_prefix(self, check: Check):
        if self.verbose:
            self.f_out.write(self.verbose_check_template.format(name=get_check_name(check)))

    def format_title(self, message: CheckMessage) -> str:
        msg = message.msg
        if message.obj:
            msg = f"{message.obj} - {msg}"

        if self.no_color:
            title_style = ""
            line_sep = "\n"
        else:
            title_style = COLOURS[message.level][0]
            line_sep = Style.RESET_ALL + "\n" + title_style

        return self.title_template.format(
            style=title_style,
            level=message.level_name,
            title=wrap_text(msg, self.width, indent=9, line_sep=line_sep).lstrip(),
        )

    def format_hint(self, message: CheckMessage) -> str:
        hint = message.hint
        if not hint:
            return ""

        if not isinstance(hint, (list, tuple)):
            hint = (hint,)

        if self.no_color:
            line_sep = "\n"
            border_style = ""
        else:
            line_sep = Style.RESET_ALL + "\n" + Style.DIM + Fore.WHITE
            border_style = COLOURS[message.level][1]

        return self.hint_template.format(
            border_style=border_style,
            hint="\n\n".join(
                wrap_text(p, self.width, indent=8, line_sep=line_sep) for p in hint
            ).lstrip(),
        )

    def render_result(self, _: Check, message: CheckMessage | None):
        if message:
            format_args = {
                "title": self.format_title(message),
                "hint": self.format_hint(message),
            }
            if not self.no_color:
                format_args["border_style"] = COLOURS[message.level][1]
            self.f_out.write(self.message_template.format(**format_args))

    def render_result_suffix(self, check: Check, message_shown: bool):
        if not (self.verbose or message_shown):
            self.f_out.write(".\n")

    def render_footer(self, checks: int, serious: int):
        status = "FAILED" if serious else "OK"
        self.f_out.write(f"\nRan {checks} check(s): {status}")
        if serious:
            self.f_out.write(f" ({serious} failure(s))")
        self.f_out.write("\n")


class TabularCheckReport(BaseReport):
    """Tab separated ``name level message`` rows."""

    def __init__(self, f_out: TextIO = sys.stdout, check_registry: CheckRegistry = registry):
        super().__init__(f_out, check_registry)
        self.writer = csv.writer(self.f_out, delimiter="\t", lineterminator="\n")

    def render_result(self, check: Check, message: CheckMessage | None):
        name = get_check_name(check)
        if message:
            self.writer.writerow([name, message.level_name, message.obj or "", message.msg])
        else:
            self.writer.writerow([name, "OK", "", ""])


def execute_report(
    output: TextIO,
    *,
    message_level: str = "INFO",
    tags: Sequence[str] | None = None,
    verbose: bool = False,
    no_color: bool = False,
    table: bool = False,
    header: str | None = None,
) -> bool:
    """
    Import the configured check modules and run a report.

    :param output: File like object to write to.
    :param message_level: Lowest level shown.
    :param tags: Only run these suites.
    :param table: Tabular output; ignores ``verbose`` and colour.
    :return: ``True`` if any check failed.

    """
    import_checks()

    level = logging.getLevelName(message_level)

    if table:
        return TabularCheckReport(output).run(level, tags)
    return CheckReport(verbose, no_color, header, output).run(level, tags)
