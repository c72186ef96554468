import logging

import pytest
from layoutbench.app import (
    EXIT_DATA_ERROR,
    EXIT_INTERNAL_ERROR,
    EXIT_INTERRUPTED,
    EXIT_USAGE,
    CliApplication,
    _key_help,
    argument,
)
from layoutbench.app.log import ColourFormatter
from layoutbench.exceptions import (
    ApplicationExit,
    GeometryError,
    InvalidConfiguration,
    InvariantViolation,
)


@pytest.mark.parametrize("key, expected", (("FOO", "FOO [eek]"), ("BAR", "BAR")))
def test_key_help(monkeypatch, key, expected):
    monkeypatch.setenv("FOO", "eek")
    monkeypatch.delenv("BAR", raising=False)

    actual = _key_help(key)

    assert actual == expected


class FakeStream:
    def __init__(self, tty: bool):
        self.tty = tty

    def isatty(self) -> bool:
        return self.tty


@pytest.fixture(autouse=True)
def restore_root_logger():
    level, handlers = logging.root.level, list(logging.root.handlers)
    yield
    logging.root.setLevel(level)
    logging.root.handlers = handlers


@pytest.fixture
def target():
    app = CliApplication(prog="sample", description="Sample application", version="1.2.3")

    @app.command
    def happy():
        """Everything works."""

    @app.command
    def sad():
        return EXIT_DATA_ERROR

    @app.command
    def cheeky():
        raise KeyboardInterrupt

    @app.command
    def invalid():
        raise GeometryError("zero volume box")

    @app.command
    def misconfigured():
        raise InvalidConfiguration("bad settings")

    @app.command
    def broken():
        raise InvariantViolation("residual too large")

    @app.command
    def angry():
        raise RuntimeError("boom")

    @app.command
    def leave():
        raise ApplicationExit(7, "Goodbye")

    return app


class TestCliApplication:
    def test_initialisation(self, target):
        assert target.application_name == "sample"
        assert target.application_settings == "layoutbench.default_settings"
        # user commands plus the built-in settings report
        assert len(target._handlers) == 9

    def test_repr(self, target):
        assert repr(target) == "CliApplication('sample')"

    def test_str(self, target):
        assert str(target) == "sample version 1.2.3 - Sample application"

    def test_application_summary__no_description(self):
        target = CliApplication(prog="bare", version="0.1")

        assert target.application_summary == "bare version 0.1"

    def test_dispatch_args(self, target):
        closure = {}

        @target.command(name="sample")
        @argument("--foo", dest="foo")
        def sample_handler(opts):
            closure["opts"] = opts

        target.dispatch(args=("sample", "--foo", "bar"))

        assert closure["opts"].foo == "bar"

    def test_dispatch__signature_args(self, target):
        closure = {}

        @target.command
        def greet(name: str, *, times: int = 2, loud: bool):
            closure["call"] = (name, times, loud)

        target.dispatch(args=("greet", "world", "--loud"))

        assert closure["call"] == ("world", 2, True)

    def test_dispatch(self, target):
        target.dispatch(args=("happy",))

    @pytest.mark.parametrize(
        "command, expected",
        (
            ("sad", EXIT_DATA_ERROR),
            ("cheeky", EXIT_INTERRUPTED),
            ("invalid", EXIT_DATA_ERROR),
            ("misconfigured", EXIT_DATA_ERROR),
            ("broken", EXIT_INTERNAL_ERROR),
            ("angry", EXIT_INTERNAL_ERROR),
        ),
    )
    def test_dispatch__exit_codes(self, target, command, expected):
        with pytest.raises(SystemExit) as ex:
            target.dispatch(args=(command,))

        assert ex.value.code == expected

    def test_dispatch__application_exit(self, target, capsys):
        with pytest.raises(ApplicationExit) as ex:
            target.dispatch(args=("leave",))

        assert ex.value.status_code == 7
        assert "Goodbye" in capsys.readouterr().err

    def test_dispatch__no_command(self, target, capsys):
        with pytest.raises(SystemExit) as ex:
            target.dispatch(args=())

        assert ex.value.code == EXIT_USAGE
        assert "No command specified!" in capsys.readouterr().out

    def test_dispatch__unknown_argument(self, target):
        with pytest.raises(SystemExit) as ex:
            target.dispatch(args=("happy", "--no-such-flag"))

        assert ex.value.code == EXIT_USAGE

    def test_dispatch__version(self, target, capsys):
        with pytest.raises(SystemExit) as ex:
            target.dispatch(args=("--version",))

        assert ex.value.code == 0
        assert "sample version: 1.2.3" in capsys.readouterr().out

    def test_dispatch__settings_report(self, target, capsys):
        target.dispatch(args=("--nocolor", "settings"))

        actual = capsys.readouterr().out

        assert "SEED" in actual

    @pytest.mark.parametrize(
        "log_color, is_tty, expected",
        (
            (None, True, ColourFormatter),
            (None, False, logging.Formatter),
            (True, False, ColourFormatter),
            (False, True, logging.Formatter),
        ),
    )
    def test_get_log_formatter(self, monkeypatch, target, log_color, is_tty, expected):
        monkeypatch.setattr(target.default_log_handler, "stream", FakeStream(is_tty))

        actual = target.get_log_formatter(log_color)

        assert type(actual) is expected

    def test_configure_logging__only_once(self, target):
        opts = target.parser.parse_args(("--log-level", "ERROR", "happy"))

        target.configure_logging(opts)
        target.configure_logging(opts)

        assert not hasattr(target, "_init_logger")
        assert logging.root.level == logging.ERROR

    def test_configure_logging__command_level(self):
        target = CliApplication(prog="quiet")

        @target.command(loglevel=logging.WARNING)
        def hush():
            pass

        opts = target.parser.parse_args(("hush",))
        opts.log_level = "DEFAULT"

        target.configure_logging(opts)

        assert logging.root.level == logging.WARNING
