import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from laclab.wardprobe import default_corpus  # noqa: E402


@pytest.fixture(scope="session")
def corpus():
    return default_corpus()
