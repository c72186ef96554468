"""
Messages
~~~~~~~~

Findings returned by a check. ``obj`` names the property that failed as
``"<module>.<property>"``.

"""

from logging import CRITICAL, DEBUG, ERROR, INFO, WARNING, getLevelName
from traceback import format_exc
from typing import Any

__all__ = (
    "CRITICAL",
    "DEBUG",
    "ERROR",
    "INFO",
    "WARNING",
    "CheckMessage",
    "Critical",
    "Debug",
    "Error",
    "Info",
    "UnhandledException",
    "Warn",
)


class CheckMessage:
    """
    Check message base class
    """

    __slots__ = ("hint", "level", "msg", "obj")

    def __init__(self, level: int, msg: str, hint: str | None = None, obj: Any = None):
        """
        :param level: Importance of the message (a logging level).
        :param msg: What went wrong; word wrapped for display.
        :param hint: How to investigate; a string or a list of paragraphs.
        :param obj: Property the message relates to, e.g. ``"metrics.iou_oracle"``.

        """
        self.level = level
        self.msg = msg
        self.hint = hint
        self.obj = obj

    def __eq__(self, other):
        if isinstance(other, self.__class__):
            return all(
                getattr(self, attr) == getattr(other, attr)
                for attr in ("level", "msg", "hint", "obj")
            )
        return NotImplemented

    def __hash__(self):
        return hash((self.level, self.msg, self.obj))

    def __str__(self) -> str:
        obj = "?" if self.obj is None else str(self.obj)
        hint = f"\n\tHINT: {self.hint}" if self.hint else ""
        return f"{obj}: {self.msg}{hint}"

    def __repr__(self):
        return (
            f"{type(self).__name__}("
            f"msg={self.msg!r}, "
            f"hint={self.hint!r}, "
            f"obj={self.obj!r})"
        )

    @property
    def level_name(self) -> str:
        return getLevelName(self.level)

    def is_serious(self, level: int = ERROR) -> bool:
        """Is the message at ``level`` or above?"""
        return self.level >= level


class Debug(CheckMessage):
    __slots__ = ()

    def __init__(self, msg: str, hint: str | None = None, obj: Any = None):
        super().__init__(DEBUG, msg, hint, obj)


class Info(CheckMessage):
    __slots__ = ()

    def __init__(self, msg: str, hint: str | None = None, obj: Any = None):
        super().__init__(INFO, msg, hint, obj)


class Warn(CheckMessage):
    __slots__ = ()

    def __init__(self, msg: str, hint: str | None = None, obj: Any = None):
        super().__init__(WARNING, msg, hint, obj)


class Error(CheckMessage):
    __slots__ = ()

    def __init__(self, msg: str, hint: str | None = None, obj: Any = None):
        super().__init__(ERROR, msg, hint, obj)


class Critical(CheckMessage):
    __slots__ = ()

    def __init__(self, msg: str, hint: str | None = None, obj: Any = None):
        super().__init__(CRITICAL, msg, hint, obj)


class UnhandledException(CheckMessage):
    """
    Error raised inside a check; the traceback becomes the hint.
    """

    __slots__ = ()

    def __init__(self, msg: str | None = None, hint: str | None = None, obj: Any = None):
        super().__init__(ERROR, msg or "Unhandled Exception", hint or format_exc(), obj)
