import random
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from pcbpv import corpus

settings.register_profile(
    "repo", derandomize=True, deadline=None, print_blob=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

SEEDS = st.integers(min_value=0, max_value=2**32 - 1)


def rng_for(seed: int) -> random.Random:
    return random.Random(seed)


@pytest.fixture(scope="session")
def load():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = corpus.load(name)
        return cache[name]

    return get


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    if acc is not None and acc.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in acc.summary_lines():
            terminalreporter.write_line(line)
