import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent.absolute()
SRC_PATH = HERE.parent / "src"

sys.path.insert(0, SRC_PATH.as_posix())

# Ensure settings are configured
from layoutbench.conf import settings  # noqa: E402

settings.configure(["layoutbench.default_settings", "tests.settings"])


@pytest.fixture
def fixture_path() -> Path:
    return Path(__file__).parent / "fixtures"
