"""
Settings Report
~~~~~~~~~~~~~~~

Prints every effective setting, one per line.

"""

import pprint
import sys
from typing import TextIO

from colorama import Fore, Style

from ..utils import wrap_text


class SettingsReport:
    """Report of all settings in use."""

    width = 96

    def __init__(self, no_color: bool = False, f_out: TextIO | None = None, settings=None):
        from . import settings as default_settings

        self.f_out = f_out or sys.stdout
        self.settings = settings or default_settings
        if no_color:
            self.template = "{key:28} : {value}\n"
        else:
            self.template = f"{Fore.YELLOW}{{key:28}} : {Fore.CYAN}{{value}}{Style.RESET_ALL}\n"

    def output_result(self, key: str, value):
        text = wrap_text(pprint.pformat(value, 2), width=self.width, indent=31).strip()
        self.f_out.write(self.template.format(key=key, value=text))

    def run(self):
        for key, value in self.settings.items():
            self.output_result(key, value)
