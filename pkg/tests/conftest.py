import pytest

from dgr.io_pkg.registry import BoundsRegistry
from dgr.io_pkg.fixtures import FixtureSet
from dgr.search_pkg.config import SearchConfig


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the slow searches")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def registry():
    return BoundsRegistry.load()


@pytest.fixture(scope="session")
def fixtures():
    return FixtureSet.load()


@pytest.fixture
def config():
    return SearchConfig(threads=1)


@pytest.fixture
def small_dgr():
    from dgr.core_pkg.dgr_set import DgrSet
    return DgrSet([(1, 2, 4), (3, 5, 6)], n=6)
