from argparse import ArgumentError, ArgumentParser, Namespace
from enum import Enum

import pytest
from layoutbench.app import argument_actions


class TestKeyValueAction:
    def test_init__default_values(self):
        target = argument_actions.KeyValueAction(option_strings="--param", dest="param")

        assert target.default == {}
        assert target.metavar == "KEY=VALUE"

    @pytest.mark.parametrize(
        "value, expected",
        (
            ("x=y", {"x": "y"}),
            ("x=1", {"x": "1"}),
            ("x=", {"x": ""}),
            ("x=a=b", {"x": "a=b"}),
            (("x=1", "y=2"), {"x": "1", "y": "2"}),
        ),
    )
    def test_call__valid(self, value, expected):
        parser = ArgumentParser()
        namespace = Namespace()
        target = argument_actions.KeyValueAction(option_strings="--param", dest="param")

        target(parser, namespace, value)

        assert namespace.param == expected

    def test_call__repeated_merges(self):
        parser = ArgumentParser()
        namespace = Namespace(param={"x": "1"})
        target = argument_actions.KeyValueAction(option_strings="--param", dest="param")

        target(parser, namespace, "y=2")

        assert namespace.param == {"x": "1", "y": "2"}

    @pytest.mark.parametrize("value", ("", "x", "=y"))
    def test_call__invalid(self, value):
        parser = ArgumentParser()
        namespace = Namespace()
        target = argument_actions.KeyValueAction(option_strings="--param", dest="param")

        with pytest.raises(ArgumentError):
            target(parser, namespace, value)


class Colour(Enum):
    Red = "red"
    Green = "green"
    Blue = "blue"


class TestEnumValue:
    def test_init__choices_are_values(self):
        target = argument_actions.EnumValue(option_strings="--colour", dest="colour", type=Colour)

        assert target.choices == ("red", "green", "blue")

    def test_init__restricted_choices(self):
        target = argument_actions.EnumValue(
            option_strings="--colour", dest="colour", type=Colour, choices=(Colour.Red, Colour.Blue)
        )

        assert target.choices == ("red", "blue")

    @pytest.mark.parametrize("type_", (None, str))
    def test_init__not_an_enum(self, type_):
        with pytest.raises(TypeError, match="type must be an Enum"):
            argument_actions.EnumValue(option_strings="--colour", dest="colour", type=type_)

    def test_call(self):
        namespace = Namespace()
        target = argument_actions.EnumValue(option_strings="--colour", dest="colour", type=Colour)

        target(ArgumentParser(), namespace, "green")

        assert namespace.colour is Colour.Green

    def test_parse_args(self):
        parser = ArgumentParser()
        parser.add_argument("--colour", type=Colour, action=argument_actions.EnumValue)

        opts = parser.parse_args(["--colour", "blue"])

        assert opts.colour is Colour.Blue


class TestAppendEnumValue:
    def test_parse_args(self):
        parser = ArgumentParser()
        parser.add_argument("--colour", type=Colour, action=argument_actions.AppendEnumValue)

        opts = parser.parse_args(["--colour", "blue", "--colour", "red"])

        assert opts.colour == [Colour.Blue, Colour.Red]

    def test_parse_args__default_is_not_mutated(self):
        default = [Colour.Green]
        parser = ArgumentParser()
        parser.add_argument("--colour", type=Colour, action=argument_actions.AppendEnumValue, default=default)

        opts = parser.parse_args(["--colour", "red"])

        assert opts.colour == [Colour.Green, Colour.Red]
        assert default == [Colour.Green]
