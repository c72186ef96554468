from argparse import ArgumentTypeError

import pytest
from layoutbench.app import argument_types
from layoutbench.benchgen.batch import ParamRange


class TestFractionType:
    @pytest.mark.parametrize(
        "open_low, open_high, value, expected",
        (
            (False, False, "0", 0.0),
            (False, False, "1", 1.0),
            (False, False, "0.5", 0.5),
            (True, True, "0.25", 0.25),
            (False, True, "0", 0.0),
        ),
    )
    def test_valid_value(self, open_low, open_high, value, expected):
        target = argument_types.FractionType(open_low=open_low, open_high=open_high)

        actual = target(value)

        assert actual == expected

    @pytest.mark.parametrize(
        "open_low, open_high, value",
        (
            (False, False, "-0.1"),
            (False, False, "1.5"),
            (True, False, "0"),
            (False, True, "1"),
        ),
    )
    def test_out_of_range(self, open_low, open_high, value):
        target = argument_types.FractionType(open_low=open_low, open_high=open_high)

        with pytest.raises(ArgumentTypeError, match="is outside"):
            target(value)

    def test_not_a_number(self):
        target = argument_types.FractionType()

        with pytest.raises(ArgumentTypeError, match="is not a number"):
            target("half")

    @pytest.mark.parametrize(
        "open_low, open_high, expected",
        ((False, False, "[0, 1]"), (True, True, "(0, 1)"), (True, False, "(0, 1]")),
    )
    def test_repr(self, open_low, open_high, expected):
        target = argument_types.FractionType(open_low=open_low, open_high=open_high)

        assert repr(target) == expected


class TestRangeType:
    @pytest.mark.parametrize(
        "value, expected",
        (
            ("4", 4),
            ("0.3", 0.3),
            ("3:5", ParamRange(3, 5)),
            ("0.2:0.4", ParamRange(0.2, 0.4)),
        ),
    )
    def test_valid_value(self, value, expected):
        target = argument_types.RangeType(minimum=0)

        actual = target(value)

        assert actual == expected

    @pytest.mark.parametrize("value", ("many", "5:3", "1:x"))
    def test_invalid_value(self, value):
        target = argument_types.RangeType()

        with pytest.raises(ArgumentTypeError, match="is not N or LO:HI"):
            target(value)

    @pytest.mark.parametrize("value", ("1", "1:4"))
    def test_below_minimum(self, value):
        target = argument_types.RangeType(minimum=2)

        with pytest.raises(ArgumentTypeError, match="is below 2"):
            target(value)


class TestPositiveInt:
    @pytest.mark.parametrize("allow_zero, value, expected", ((False, "1", 1), (True, "0", 0), (False, "12", 12)))
    def test_valid_value(self, allow_zero, value, expected):
        target = argument_types.PositiveInt(allow_zero=allow_zero)

        assert target(value) == expected

    @pytest.mark.parametrize(
        "allow_zero, value, message",
        (
            (False, "0", "must be >= 1"),
            (True, "-1", "must be >= 0"),
            (False, "1.5", "is not an integer"),
        ),
    )
    def test_invalid_value(self, allow_zero, value, message):
        target = argument_types.PositiveInt(allow_zero=allow_zero)

        with pytest.raises(ArgumentTypeError, match=message):
            target(value)
