from pathlib import Path

import pytest
from yarl import URL

from layoutbench.conf import loaders
from layoutbench.conf.loaders import Loader
from layoutbench.exceptions import InvalidConfiguration, UnsupportedContentType


class TestModuleLoader:
    def test__module_exists(self):
        target = loaders.ModuleLoader("tests.settings")

        actual = dict(target)

        assert str(target) == "python:tests.settings"
        assert all(key.isupper() for key in actual)
        assert actual["UPPER_VALUE"] == "foo"

    def test__module_not_found(self):
        target = loaders.ModuleLoader("tests.unknown.settings")

        with pytest.raises(InvalidConfiguration):
            dict(target)

        assert str(target) == "python:tests.unknown.settings"


class TestFileLoader:
    def test__valid_file(self, fixture_path: Path):
        file = fixture_path / "settings.json"
        target = loaders.FileLoader(file, "application/json")

        actual = dict(target)

        assert str(target) == f"file://{file.as_posix()}?type=application/json"
        assert actual == {"UPPER_CASE": "foo"}

    def test__yaml_file(self, fixture_path: Path):
        pytest.importorskip("yaml")
        target = loaders.FileLoader(fixture_path / "settings.yaml", "application/x-yaml")

        actual = dict(target)

        assert actual == {"UPPER_CASE": "foo", "REWARD_LAMBDA1": 0.5}

    def test__toml_file(self, fixture_path: Path):
        pytest.importorskip("toml")
        target = loaders.FileLoader(fixture_path / "settings.toml", "application/toml")

        actual = dict(target)

        assert actual == {"UPPER_CASE": "foo", "IOU_THRESHOLDS": [0.25, 0.5]}

    @pytest.mark.parametrize(
        "file_name",
        ("missing-file.json", "settings-invalid-file.json", "settings-invalid-container.json"),
    )
    def test__invalid(self, fixture_path: Path, file_name: str):
        target = loaders.FileLoader(fixture_path / file_name, "application/json")

        with pytest.raises(InvalidConfiguration):
            dict(target)

    def test__unknown_content_type(self, fixture_path: Path):
        target = loaders.FileLoader(fixture_path / "settings.json", "text/plain")

        with pytest.raises(UnsupportedContentType):
            dict(target)


@pytest.mark.parametrize(
    ("url", "expected"),
    (
        ("file:///cfg/run.json", "application/json"),
        ("file:///cfg/run.YML", "application/x-yaml"),
        ("file:///cfg/run.toml", "application/toml"),
        ("file:///cfg/run.cfg?type=application/json", "application/json"),
    ),
)
def test_content_type_from_url(url, expected):
    assert loaders.content_type_from_url(URL(url)) == expected


class TestSettingsLoaderRegistry:
    def test_register__as_decorator(self):
        target = loaders.SettingsLoaderRegistry()

        @target.register
        class SimpleSettings(Loader):
            scheme = "eek"

            @classmethod
            def from_url(cls, settings_url):
                return cls(settings_url)

            def __init__(self, settings_url):
                self.settings_url = settings_url

            def __iter__(self):
                return iter({"SIMPLE": self.settings_url}.items())

        assert "eek" in target
        assert isinstance(target.factory("eek:sample"), SimpleSettings)

    @pytest.mark.parametrize(
        ("settings_uri", "expected", "str_value"),
        (
            ("sample.settings", loaders.ModuleLoader, "python:sample.settings"),
            ("python:sample.settings", loaders.ModuleLoader, "python:sample.settings"),
            (
                "file:///path/to/sample.json",
                loaders.FileLoader,
                "file:///path/to/sample.json?type=application/json",
            ),
            ("run.yaml", loaders.FileLoader, "file://run.yaml?type=application/x-yaml"),
            ("cfg/run.toml", loaders.FileLoader, "file://cfg/run.toml?type=application/toml"),
        ),
    )
    def test_factory__loaders_correctly_resolved(self, settings_uri, expected, str_value):
        actual = loaders.registry.factory(settings_uri)

        assert isinstance(actual, expected)
        assert str(actual) == str_value

    def test_factory__invalid_settings_uri(self):
        with pytest.raises(InvalidConfiguration) as ex:
            loaders.registry.factory("py:sample.settings")

        assert str(ex.value).startswith("Unknown scheme `py` in settings URI:")
