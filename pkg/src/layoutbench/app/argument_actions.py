"""
Argument actions for common command line situations.

.. autoclass:: KeyValueAction

.. autoclass:: EnumValue

.. autoclass:: AppendEnumValue

"""

import copy
from argparse import Action, ArgumentError, ArgumentParser, Namespace
from collections.abc import Sequence
from enum import Enum

__all__ = ("AppendEnumValue", "EnumValue", "KeyValueAction")


class KeyValueAction(Action):
    """
    Collects repeated ``KEY=VALUE`` arguments into a dict::

        > layoutbench gen --task sorting --param object_gap=0.04 --param axis=x
        {'object_gap': '0.04', 'axis': 'x'}

    """

    def __init__(self, **kwargs):
        kwargs.setdefault("metavar", "KEY=VALUE")
        kwargs.setdefault("default", {})
        super().__init__(**kwargs)

    def parse_value(self, value: str) -> tuple[str, str]:
        key, part, value = value.partition("=")
        if not part or not key:
            raise ArgumentError(self, "Expected in the form KEY=VALUE")
        return key, value

    def __call__(
        self,
        parser: ArgumentParser,
        namespace: Namespace,
        values: Sequence[str] | str,
        option_string: str | None = None,
    ):
        items = dict(getattr(namespace, self.dest, None) or {})
        if isinstance(values, str):
            values = (values,)
        items.update(self.parse_value(value) for value in values)
        setattr(namespace, self.dest, items)


class EnumValue(Action):
    """
    Enum argument chosen by value; the choices are listed in ``--help``::

        > layoutbench gen --task alignment
        TaskKind.ALIGNMENT

    """

    def __init__(self, **kwargs):
        enum = kwargs.pop("type", None)
        if enum is None or not issubclass(enum, Enum):
            raise TypeError("type must be an Enum when using EnumValue")
        self._enum = enum
        kwargs["choices"] = tuple(member.value for member in kwargs.get("choices") or enum)
        super().__init__(**kwargs)

    def to_enum(self, value) -> Enum:
        return self._enum(value)

    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, self.to_enum(values))


class AppendEnumValue(EnumValue):
    """Repeatable :class:`EnumValue`; collects a list."""

    def __call__(self, parser, namespace, values, option_string=None):
        items = copy.copy(getattr(namespace, self.dest, None) or [])
        items.append(self.to_enum(values))
        setattr(namespace, self.dest, items)
