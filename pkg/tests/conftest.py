import os

import pytest
from hypothesis import HealthCheck, settings

from wheelworks.config import Config

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def cache_config(tmp_path) -> Config:
    return Config(cache_dir=tmp_path / "cache")


@pytest.fixture
def acceptance_log(request):
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])
    return lines.append


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
