import pytest
from hypothesis import settings

from support import four_world

# cases build whole epistemic states; timing varies too much for per-example deadlines
settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture
def four_world_state():
    return four_world()
