from pathlib import Path

import pytest

from rtsverify.frameworks import parse_framework
from rtsverify.hardness.tm import read_tm
from rtsverify.tools.instance_io import read_instance_file

MODELS = Path(__file__).resolve().parent.parent / "models"


@pytest.fixture(scope="session")
def models_dir() -> Path:
    return MODELS


@pytest.fixture(scope="session")
def token_file() -> Path:
    return MODELS / "token_passing.rts"


@pytest.fixture(scope="session")
def token_parsed(token_file):
    return read_instance_file(token_file)


@pytest.fixture(scope="session")
def sigma(token_parsed):
    return token_parsed.sigma


@pytest.fixture(scope="session")
def token(token_parsed):
    """Token passing with a framework spec, property two_tokens unless given."""
    cache = {}

    def build(spec: str, prop: str = "two_tokens"):
        if spec not in cache:
            cache[spec] = token_parsed.instance(parse_framework(spec, token_parsed.sigma))
        return cache[spec].select(prop)

    return build


@pytest.fixture(scope="session")
def token_xor(token):
    return token("xor")


@pytest.fixture(scope="session")
def token_disj(token):
    return token("disj=1")


@pytest.fixture(scope="session")
def growth_parsed():
    return read_instance_file(MODELS / "token_passing_growth.rts")


@pytest.fixture(scope="session")
def write_once_tm():
    return read_tm(MODELS / "write_once.tm")


@pytest.fixture(scope="session")
def accept_tm():
    return read_tm(MODELS / "accept_right.tm")
