import math

import pytest

from slipt.config import load_config
from slipt.scenario import build_scenario


@pytest.fixture(scope="session")
def paper_config():
    return load_config()


@pytest.fixture(scope="session")
def paper_scenario(paper_config):
    return build_scenario(paper_config)


@pytest.fixture(scope="session")
def rx(paper_scenario):
    return paper_scenario.rx


@pytest.fixture(scope="session")
def led(paper_scenario):
    return paper_scenario.led


@pytest.fixture(scope="session")
def cell(paper_scenario):
    return paper_scenario.cell


def deg(x):
    return math.radians(x)
