"""
Validated argument types.

.. autoclass:: FractionType

.. autoclass:: RangeType

.. autoclass:: PositiveInt

"""

import argparse

from ..benchgen.batch import ParamRange
from .arguments import ArgumentType

__all__ = ("FractionType", "PositiveInt", "RangeType")


class FractionType(ArgumentType):
    """
    Float inside ``[0, 1]``; either end can be made open::

        @app.command
        def eval(*, iou_threshold: Sequence[FractionType(open_low=True, open_high=True)]): ...

    """

    def __init__(self, *, open_low: bool = False, open_high: bool = False):
        self.open_low = open_low
        self.open_high = open_high

    def __repr__(self) -> str:
        return f"{'(' if self.open_low else '['}0, 1{')' if self.open_high else ']'}"

    def __call__(self, value: str) -> float:
        try:
            number = float(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{value!r} is not a number") from None
        too_low = number <= 0 if self.open_low else number < 0
        too_high = number >= 1 if self.open_high else number > 1
        if too_low or too_high:
            raise argparse.ArgumentTypeError(f"{value} is outside {self!r}")
        return number


class RangeType(ArgumentType):
    """
    A number ``N`` or an inclusive range ``LO:HI`` sampled per instance::

        > layoutbench gen --task alignment --rows 3:5 --perturb 0.2:0.4

    """

    def __init__(self, *, minimum: float | None = None):
        self.minimum = minimum

    def __call__(self, value: str) -> ParamRange | int | float:
        try:
            parsed = ParamRange.parse(value)
        except ValueError as ex:
            raise argparse.ArgumentTypeError(f"{value!r} is not N or LO:HI ({ex})") from None
        low = parsed.low if isinstance(parsed, ParamRange) else parsed
        if self.minimum is not None and low < self.minimum:
            raise argparse.ArgumentTypeError(f"{value} is below {self.minimum}")
        return parsed


class PositiveInt(ArgumentType):
    """Integer ``>= 1``; ``allow_zero`` accepts ``0`` too."""

    def __init__(self, *, allow_zero: bool = False):
        self.allow_zero = allow_zero

    def __call__(self, value: str) -> int:
        try:
            number = int(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{value!r} is not an integer") from None
        if number < (0 if self.allow_zero else 1):
            raise argparse.ArgumentTypeError(f"{value} must be {'>= 0' if self.allow_zero else '>= 1'}")
        return number
