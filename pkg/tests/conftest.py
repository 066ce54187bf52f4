import pytest
from hypothesis import HealthCheck, settings

from homprofile.transforms import make_figure3_pair

settings.register_profile(
    "repo",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture
def figure3():
    return make_figure3_pair()
