"""
Configuration
~~~~~~~~~~~~~

Settings are UPPER_CASE values merged from the package defaults and one optional
runtime source::

    >>> from layoutbench.conf import settings
    >>> settings.configure("layoutbench.default_settings", "run.yaml")
    >>> settings.REWARD_LAMBDA1
    0.2

The runtime source may also be named by the ``LAYOUTBENCH_SETTINGS`` environment
variable. Sources are URLs (``python:module.path``, ``file:///cfg.json``) or bare
paths to ``.json``, ``.yaml`` or ``.toml`` files.

Tests apply temporary changes with :meth:`Settings.modify`::

    >>> with settings.modify() as patch:
    ...     patch.REWARD_LAMBDA1 = 0.5
    ...     del patch.SEED

Every change is rolled back when the block exits.

"""

import logging
import os
import pickle
import warnings
from collections.abc import Iterable, Sequence
from typing import IO, Any

from . import base_settings
from .loaders import Loader, ModuleLoader, factory, settings_iterator

__all__ = ("DEFAULT_ENV_KEY", "Settings", "export_settings", "restore_settings", "settings")

logger = logging.getLogger(__name__)

DEFAULT_ENV_KEY = "LAYOUTBENCH_SETTINGS"


class ModifySettingsContext:
    """
    Temporary modifications to a settings container, reverted on exit.

    Mutating a value in place (e.g. appending to a list) is not tracked; assign
    a copy instead.
    """

    def __init__(self, container: "Settings"):
        self.__dict__.update(_container=container, _roll_back=[])

    def __enter__(self) -> "ModifySettingsContext":
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        for action, args in reversed(self._roll_back):
            action(*args)

    def __getattr__(self, item):
        return getattr(self._container, item)

    def __setattr__(self, key, value):
        items = self._container.__dict__
        if key in items:
            self._roll_back.append((items.__setitem__, (key, items[key])))
        else:
            self._roll_back.append((items.__delitem__, (key,)))
        items[key] = value

    def __delattr__(self, item):
        items = self._container.__dict__
        if item in items:
            self._roll_back.append((items.__setitem__, (item, items[item])))
            del items[item]

    def reset_settings(self):
        """Drop every setting and source so the CLI can configure from scratch."""
        container = self._container
        saved = [(key, container.__dict__.pop(key)) for key in container.keys]
        container._populate_base_settings()  # noqa: SLF001

        def restore():
            for key in container.keys:
                del container.__dict__[key]
            container.__dict__.update(saved)

        self._roll_back.append((restore, ()))


class Settings:
    """Read-only settings container."""

    def __init__(self, base=None):
        self._populate_base_settings(base)

    def __getattr__(self, item):
        raise AttributeError(f"Setting not defined {item!r}")

    def __setattr__(self, key, value):
        raise AttributeError("Readonly object")

    def __getitem__(self, item):
        return self.__dict__[item]

    def __getstate__(self) -> dict[str, Any]:
        return dict(self.items())

    def __setstate__(self, state: dict[str, Any]):
        self.__dict__.update(state)

    def __repr__(self) -> str:
        sources = self.SETTINGS_SOURCES or "UN-CONFIGURED"
        return f"{self.__class__.__name__}({sources})"

    def _populate_base_settings(self, base=None):
        self.__dict__.update(settings_iterator(base or base_settings))
        self.__dict__["SETTINGS_SOURCES"] = []

    @property
    def is_configured(self) -> bool:
        return bool(self.SETTINGS_SOURCES)

    @property
    def keys(self) -> Sequence[str]:
        return [key for key in self.__dict__ if key.isupper()]

    def items(self) -> Iterable[tuple[str, Any]]:
        """Sorted key/value pairs."""
        data = self.__dict__
        for key in sorted(self.keys):
            yield key, data[key]

    def load(self, loader: Loader, apply_method=None):
        """Merge the key/value pairs produced by ``loader``.

        A source that was already loaded is skipped with a warning.
        """
        apply_method = apply_method or self.__dict__.__setitem__

        source = str(loader)
        if source in self.SETTINGS_SOURCES:
            warnings.warn(f"Settings already loaded: {source}", category=ImportWarning, stacklevel=2)
            logger.warning("Settings already loaded: %s", source)
            return

        logger.info("Loading settings from: %s", source)
        with loader:
            for key, value in loader:
                logger.debug("Importing setting: %s", key)
                apply_method(key, value)
        self.SETTINGS_SOURCES.append(source)

        for url in self.__dict__.pop("INCLUDE_SETTINGS", None) or ():
            self.load(factory(url), apply_method)

    def configure(
        self,
        default_settings: str | Sequence[str],
        runtime_settings: str | None = None,
        additional_loaders: Sequence[Loader] | None = None,
        env_settings_key: str = DEFAULT_ENV_KEY,
    ):
        """Load defaults, then the runtime source and any extra loaders.

        :param default_settings: Module(s) holding default settings.
        :param runtime_settings: Settings source given on the command line; falls
            back to the ``env_settings_key`` environment variable.

        """
        if isinstance(default_settings, str):
            default_settings = [default_settings]

        loaders: list[Loader] = [ModuleLoader(name) for name in default_settings]
        runtime_settings = runtime_settings or os.environ.get(env_settings_key)
        if runtime_settings:
            loaders.append(factory(runtime_settings))
        loaders.extend(additional_loaders or ())

        for loader in loaders:
            self.load(loader)
        logger.debug("Settings loaded %s.", self.SETTINGS_SOURCES)

    def modify(self) -> ModifySettingsContext:
        """Context manager for temporary changes."""
        return ModifySettingsContext(self)


settings = Settings()


def export_settings(file: IO, *, serialiser=pickle):
    """Write the current settings to ``file`` (pickle by default)."""
    serialiser.dump(settings.__getstate__(), file)


def restore_settings(file: IO, *, serialiser=pickle):
    """Replace the current settings with those written by :func:`export_settings`."""
    settings.__setstate__(serialiser.load(file))
