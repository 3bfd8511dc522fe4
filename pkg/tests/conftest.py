import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from a1pic.corpus import corpus, invertible_corpus  # noqa: E402


@pytest.fixture(scope="session")
def modules():
    return corpus()


@pytest.fixture(scope="session")
def invertibles():
    return invertible_corpus()
