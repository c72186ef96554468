"""
Typed Settings
~~~~~~~~~~~~~~

Settings declared on a :class:`SettingsDef` subclass are loaded like any module
level setting, and the same class reads the runtime value back::

    class RewardSettings(SettingsDef):
        REWARD_LAMBDA1: float = 0.2

    RewardSettings.REWARD_LAMBDA1  # current value from layoutbench.conf.settings

"""

from typing import Any


class SettingDescriptor:
    """Reads one named setting."""

    __slots__ = ("setting",)

    def __init__(self, setting: str):
        self.setting = setting

    def __get__(self, instance, owner):
        from . import settings

        return getattr(settings, self.setting, None)


class SettingsDefType(type):
    """Collects UPPER_CASE class attributes as settings."""

    def __new__(cls, name: str, bases, dct: dict[str, Any], *, prefix: str = ""):
        if prefix and not prefix.isupper():
            raise ValueError("Prefix must be upper snake case.")

        values = []
        descriptors = {}
        for key, value in dct.items():
            if key.isupper():
                setting = f"{prefix}{key}"
                values.append((setting, value))
                descriptors[key] = SettingDescriptor(setting)

        dct.update(descriptors)
        dct["_settings"] = tuple(values)
        dct["__slots__"] = ()
        return super().__new__(cls, name, bases, dct)


class SettingsDef(metaclass=SettingsDefType):
    """Base for typed settings definitions."""
