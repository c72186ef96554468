"""
Settings Loaders
~~~~~~~~~~~~~~~~

A loader yields the key/value pairs of one settings source. Sources are named by
URL; the scheme picks the loader:

``python:layoutbench.default_settings``
    UPPER_CASE attributes of an importable module (the default when a source has
    no scheme and no known file suffix).

``file:///path/run.json?type=application/json``
    A JSON, YAML or TOML file. The content type comes from the ``type`` query or
    the file suffix; bare paths such as ``run.yaml`` are accepted too.

"""

import abc
import importlib
import json
import mimetypes
from collections.abc import Callable, Iterator, Sequence
from pathlib import Path
from typing import Any, TextIO

from yarl import URL

from ..exceptions import InvalidConfiguration, UnsupportedContentType
from .typed_settings import SettingsDefType

try:
    from yaml import YAMLError
    from yaml import safe_load as yaml_load
except ImportError:  # pragma: no cover
    yaml_load = None
    YAMLError = ValueError

try:
    from toml import load as toml_load
except ImportError:  # pragma: no cover
    toml_load = None

JSON_MIME_TYPE = "application/json"
TOML_MIME_TYPE = "application/toml"
YAML_MIME_TYPE = "application/x-yaml"

FILE_SUFFIXES = {
    ".json": JSON_MIME_TYPE,
    ".toml": TOML_MIME_TYPE,
    ".yaml": YAML_MIME_TYPE,
    ".yml": YAML_MIME_TYPE,
}

ContentTypeParser = Callable[[TextIO], Any]


def settings_iterator(obj: object) -> Iterator[tuple[str, Any]]:
    """UPPER_CASE attributes of ``obj``, expanding :class:`SettingsDef` classes."""
    for key in dir(obj):
        value = getattr(obj, key)
        if isinstance(value, SettingsDefType):
            yield from getattr(value, "_settings", ())
        elif key.isupper():
            yield key, value


def content_type_from_url(url: URL) -> str | None:
    content_type = url.query.get("type")
    if not content_type:
        content_type = FILE_SUFFIXES.get(Path(url.path).suffix.lower())
    if not content_type:
        content_type, _ = mimetypes.guess_type(url.path, strict=False)
    return content_type


class ContentTypeParserRegistry(dict[str, ContentTypeParser]):
    """Parsers by content type; a ``None`` parser marks a missing optional extra."""

    def parse_file(self, fp: TextIO, content_type: str | None) -> Any:
        """:raises UnsupportedContentType: no parser is available."""
        parser = self.get(content_type)
        if not parser:
            raise UnsupportedContentType(f"No parser for `{content_type}`")
        return parser(fp)

    def register(self, content_types: str | Sequence[str], parser: ContentTypeParser):
        if isinstance(content_types, str):
            content_types = (content_types,)
        for content_type in content_types:
            self[content_type] = parser


content_types = ContentTypeParserRegistry(
    {JSON_MIME_TYPE: json.load, TOML_MIME_TYPE: toml_load, YAML_MIME_TYPE: yaml_load}
)


class Loader(abc.ABC):
    """Source of settings key/value pairs."""

    scheme: str | Sequence[str]

    def __enter__(self) -> "Loader":
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()

    @classmethod
    @abc.abstractmethod
    def from_url(cls, url: URL) -> "Loader":
        """Create a loader from a parsed source URL."""

    @abc.abstractmethod
    def __iter__(self) -> Iterator[tuple[str, Any]]:
        """Key/value pairs of the source."""

    def close(self):  # noqa: B027
        """Release any handles held by the loader."""


class ModuleLoader(Loader):
    """UPPER_CASE attributes of an importable module."""

    scheme = "python"

    @classmethod
    def from_url(cls, url: URL) -> Loader:
        return cls(url.path)

    def __init__(self, module: str):
        self.module = module

    def __iter__(self) -> Iterator[tuple[str, Any]]:
        try:
            mod = importlib.import_module(self.module)
        except ImportError as ex:
            raise InvalidConfiguration(f"Unable to load module: {self}\n{ex}") from ex
        return settings_iterator(mod)

    def __str__(self):
        return f"{self.scheme}:{self.module}"


class FileLoader(Loader):
    """Settings file whose root is an object."""

    scheme = "file"

    @classmethod
    def from_url(cls, url: URL) -> Loader:
        return cls(url.path, content_type_from_url(url))

    def __init__(self, path: str | Path, content_type: str | None, *, encoding: str = "UTF8"):
        self.path = Path(path)
        self.content_type = content_type
        self.encoding = encoding

    def __iter__(self) -> Iterator[tuple[str, Any]]:
        try:
            with self.path.open(encoding=self.encoding) as fp:
                data = content_types.parse_file(fp, self.content_type)
        except FileNotFoundError as ex:
            raise InvalidConfiguration(f"Settings file not found: {self}") from ex
        except OSError as ex:
            raise InvalidConfiguration(f"Unable to load settings: {self}\n{ex}") from ex
        except (ValueError, YAMLError) as ex:
            raise InvalidConfiguration(f"Unable to parse file: {self}\n{ex}") from ex

        if not isinstance(data, dict):
            raise InvalidConfiguration(f"Invalid root object, expected an Object: {self}")
        return ((key, value) for key, value in data.items() if key.isupper())

    def __str__(self):
        return f"file://{self.path.as_posix()}?type={self.content_type}"


class SettingsLoaderRegistry(dict[str, type[Loader]]):
    """Loader classes by URL scheme."""

    def register(self, loader: type[Loader]) -> type[Loader]:
        schemes = loader.scheme
        if isinstance(schemes, str):
            schemes = (schemes,)
        for scheme in schemes:
            self[scheme] = loader
        return loader

    def factory(self, source: str | URL) -> Loader:
        """Loader for a settings source.

        :raises InvalidConfiguration: unknown URL scheme.
        """
        if isinstance(source, str) and Path(source).suffix.lower() in FILE_SUFFIXES and (
            ":" not in source or Path(source).drive
        ):
            return FileLoader(source, FILE_SUFFIXES[Path(source).suffix.lower()])

        url = URL(source)
        if not url.scheme:
            return ModuleLoader.from_url(url)
        try:
            return self[url.scheme].from_url(url)
        except KeyError:
            raise InvalidConfiguration(f"Unknown scheme `{url.scheme}` in settings URI: {url}") from None


registry = SettingsLoaderRegistry({"python": ModuleLoader, "file": FileLoader})
register = registry.register
factory = registry.factory
