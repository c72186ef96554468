"""
Utils
~~~~~
"""

import textwrap
from collections.abc import Container
from typing import Any

TRUE_VALUES = ("TRUE", "T", "YES", "Y", "ON", "1")


def wrap_text(
    text: str, width: int, *, indent: int = 0, padding: int = 1, line_sep: str = "\n"
) -> str:
    """Word wrap ``text`` into lines padded to ``width``.

    :param indent: Spaces in front of every line.
    :param padding: Columns kept free at both ends of a line.

    """
    prefix = " " * indent
    lines = textwrap.wrap(
        text, width - (padding * 2), initial_indent=prefix, subsequent_indent=prefix
    )
    return line_sep.join(f"{line}{' ' * (width - len(line))}" for line in lines)


def text_to_bool(value: Any, *, true_values: Container[str] = TRUE_VALUES) -> bool:
    """Resolve a string flag such as ``"yes"``; non-strings use their truth value."""
    if isinstance(value, str):
        return value.upper() in true_values
    return bool(value)
