import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import build_flower_scene  # noqa: E402

FIXTURE_DIR = Path(__file__).parent / "fixtures"


@pytest.fixture
def flower_scene():
    return build_flower_scene()


@pytest.fixture
def fixture_dir() -> Path:
    return FIXTURE_DIR
