import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

from mdsquares.field_core import make_field  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

GRID = [(p, r) for p in (3, 5, 7, 11, 13, 17) for r in (2, 3)]


@pytest.fixture(scope="session")
def field_cache():
    cache = {}

    def get(p, r, modulus=None):
        key = (p, r, modulus)
        if key not in cache:
            cache[key] = make_field(p, r, modulus)
        return cache[key]

    return get
