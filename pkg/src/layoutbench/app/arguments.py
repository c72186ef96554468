"""
Command arguments are derived from the signature of the command function::

    @app.command
    def gen(*, task: TaskKind, count: PositiveInt = None, param: Mapping[str, str] = None):
        ...

Keyword-only parameters become ``--flags``, other parameters positionals.
Supported annotations:

- plain types accepted by ``argparse`` (``str``, ``int``, ``float``, ``Path``)
- ``bool`` as a ``store_true`` flag
- ``Enum`` subclasses, chosen by value
- ``Sequence[T]`` as a repeatable flag (``nargs="+"`` for positionals)
- ``Mapping[str, str]`` as repeatable ``KEY=VALUE`` pairs
- ``T | None`` for optional values
- :class:`ArgumentType` instances for validated values

An :func:`Arg` default adds help text, extra flags or choices.

"""

import abc
import argparse
import inspect
import logging
import types
import typing
from collections.abc import Callable, Mapping, Sequence
from enum import Enum
from functools import cached_property
from typing import Any, Union

from .argument_actions import AppendEnumValue, EnumValue, KeyValueAction

__all__ = ("Arg", "ArgumentType", "CommandGroup", "Handler", "argument")

Handler = Callable[..., int | None]

EMPTY = inspect.Parameter.empty


class ParserBase:
    """Wraps an ``argparse`` parser."""

    def __init__(self, parser: argparse.ArgumentParser):
        self.parser = parser

    def argument(self, *name_or_flags, **kwargs) -> argparse.Action:
        return self.parser.add_argument(*name_or_flags, **kwargs)

    def argument_group(self, *, title: str | None = None, description: str | None = None):
        return self.parser.add_argument_group(title, description)


class ArgumentType(abc.ABC):
    """Custom argument type; raise ``argparse.ArgumentTypeError`` on bad input."""

    @abc.abstractmethod
    def __call__(self, value: str) -> Any:
        """Convert the command line string."""


class CommandProxy(ParserBase):
    """A command function bound to its sub-parser."""

    def __init__(self, handler: Handler, parser: argparse.ArgumentParser, loglevel: int = logging.INFO):
        super().__init__(parser)
        self.handler = handler
        self.loglevel = loglevel
        self.__doc__ = handler.__doc__
        self.__name__ = handler.__name__
        self.__module__ = handler.__module__

        for arg in getattr(handler, "arguments__", ()):
            arg.register_with_proxy(self)

        self._args: list[tuple[str, str]] = []
        self._require_namespace: str | None = None
        self._extract_args(handler)

    def _extract_args(self, func):
        parameters = inspect.signature(func).parameters

        # A lone ``opts`` style parameter receives the namespace
        if len(parameters) == 1:
            ((name, parameter),) = parameters.items()
            if parameter.kind is parameter.POSITIONAL_OR_KEYWORD and parameter.annotation in (
                EMPTY,
                argparse.Namespace,
            ):
                self._require_namespace = name
                return

        for name, parameter in parameters.items():
            if parameter.annotation is argparse.Namespace:
                self._require_namespace = name
            else:
                action = Argument.from_parameter(name, parameter).register_with_proxy(self)
                self._args.append((name, action.dest))

    def __call__(self, opts: argparse.Namespace):
        kwargs = {kwarg: getattr(opts, dest) for kwarg, dest in self._args}
        if self._require_namespace:
            kwargs[self._require_namespace] = opts
        return self.handler(**kwargs)


class Argument:
    """
    A single command line argument; usable as a decorator on a command function
    or, through :func:`Arg`, as the default value of a parameter.
    """

    __slots__ = ("kwargs", "name_or_flags")

    @classmethod
    def arg(
        cls,
        *flags: str,
        default: Any = EMPTY,
        choices: Sequence[Any] | None = None,
        help: str | None = None,  # noqa: A002
        metavar: str | None = None,
    ) -> "Argument":
        """Inline argument definition; the flag name comes from the parameter."""
        return cls(*flags, default=default, choices=choices, help_text=help, metavar=metavar)

    @staticmethod
    def _handle_generics(origin, type_, positional: bool, kwargs: dict[str, Any]):
        args = typing.get_args(type_)
        if origin in (Union, types.UnionType):
            if len(args) != 2 or type(None) not in args:  # noqa: PLR2004
                raise TypeError("Only `T | None` unions are supported")
            if positional:
                kwargs["nargs"] = "?"
            kwargs.setdefault("default", None)
            inner = next(arg for arg in args if arg is not type(None))
            return Argument._resolve(inner, positional, kwargs)

        if isinstance(origin, type) and issubclass(origin, Mapping):
            kwargs["action"] = KeyValueAction
            if positional:
                kwargs["nargs"] = "+"
            return None

        if isinstance(origin, type) and issubclass(origin, Sequence):
            item = args[0] if args else str
            if isinstance(item, type) and issubclass(item, Enum):
                kwargs["action"] = AppendEnumValue
            elif positional:
                kwargs["nargs"] = "+"
            else:
                kwargs["action"] = "append"
            return item

        raise TypeError(f"Unsupported generic type: {origin!r}")

    @staticmethod
    def _handle_types(type_: type, positional: bool, kwargs: dict[str, Any]):
        if type_ is bool:
            kwargs["action"] = "store_true"
            kwargs.setdefault("default", False)
            return None
        if issubclass(type_, Enum):
            kwargs["action"] = EnumValue
        if not positional and "default" not in kwargs:
            kwargs["required"] = True
        return type_

    @staticmethod
    def _resolve(type_, positional: bool, kwargs: dict[str, Any]):
        origin = typing.get_origin(type_)
        if origin is not None:
            return Argument._handle_generics(origin, type_, positional, kwargs)
        if isinstance(type_, type):
            return Argument._handle_types(type_, positional, kwargs)
        if isinstance(type_, ArgumentType):
            return type_
        raise TypeError(f"Unsupported type: {type_!r}")

    @classmethod
    def from_parameter(cls, name: str, parameter: inspect.Parameter) -> "Argument":
        """Argument for one parameter of a command function."""
        positional = parameter.kind is not parameter.KEYWORD_ONLY
        default = parameter.default
        flag = name.upper() if positional else f"--{name.replace('_', '-')}"

        if isinstance(default, Argument):
            instance = default
            default = EMPTY
            if flag not in instance.name_or_flags:
                instance.name_or_flags = (flag, *instance.name_or_flags)
        else:
            instance = cls(flag)

        kwargs = instance.kwargs
        if default is not EMPTY:
            kwargs.setdefault("default", default)
        if not positional:
            kwargs.setdefault("dest", name)

        type_ = cls._resolve(parameter.annotation, positional, kwargs)
        if type_ is not None:
            kwargs["type"] = type_
        return instance

    def __init__(
        self,
        *name_or_flags,
        action: str | type[argparse.Action] | None = None,
        nargs: int | str | None = None,
        const: Any = None,
        default: Any = EMPTY,
        type: Callable[[Any], Any] | None = None,  # noqa: A002
        choices: Sequence[Any] | None = None,
        required: bool | None = None,
        help_text: str | None = None,
        metavar: str | None = None,
        dest: str | None = None,
    ):
        self.name_or_flags = name_or_flags
        kwargs = (
            ("action", action),
            ("nargs", nargs),
            ("const", const),
            ("type", type),
            ("choices", choices),
            ("required", required),
            ("help", help_text),
            ("metavar", metavar),
            ("dest", dest),
        )
        self.kwargs = {key: value for key, value in kwargs if value is not None}
        if default is not EMPTY:
            self.kwargs["default"] = default

    def __call__(self, func):
        if isinstance(func, CommandProxy):
            self.register_with_proxy(func)
        elif hasattr(func, "arguments__"):
            func.arguments__.insert(0, self)
        else:
            func.arguments__ = [self]
        return func

    def register_with_proxy(self, proxy: CommandProxy) -> argparse.Action:
        return proxy.argument(*self.name_or_flags, **self.kwargs)


Arg = Argument.arg
argument = Argument


class CommandGroup(ParserBase):
    """Group of commands sharing one parser."""

    def __init__(self, parser: argparse.ArgumentParser):
        super().__init__(parser)
        self._handlers: dict[str, Handler] = {}
        self._sub_parsers = parser.add_subparsers(dest=self.handler_dest)

    @cached_property
    def handler_dest(self) -> str:
        return ":handler"

    def command(
        self,
        handler: Handler | None = None,
        *,
        name: str | None = None,
        help_text: str | None = None,
        loglevel: int = logging.INFO,
    ):
        """Decorator registering a command.

        :param name: Command name; defaults to the function name.
        :param help_text: Defaults to the function docstring.
        :param loglevel: Log level when ``--log-level`` is not given.

        """

        def inner(func: Handler) -> CommandProxy:
            kwargs = {}
            text = help_text or func.__doc__
            if text:
                kwargs["help"] = kwargs["description"] = inspect.cleandoc(text)
            name_ = name or func.__name__
            proxy = CommandProxy(func, self._sub_parsers.add_parser(name_, **kwargs), loglevel)
            self._handlers[name_] = proxy
            return proxy

        return inner(handler) if handler else inner

    def default_handler(self, _: argparse.Namespace) -> int:
        """Called when no command is given."""
        print("No command specified!")
        self.parser.print_usage()
        return 1

    def resolve_handler(self, opts: argparse.Namespace) -> Handler:
        return self._handlers.get(getattr(opts, self.handler_dest, None), self.default_handler)

    def dispatch_handler(self, opts: argparse.Namespace) -> int | None:
        return self.resolve_handler(opts)(opts)
