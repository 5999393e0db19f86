from pathlib import Path

import pytest

from cdod.diagrams import read_cd, read_od, resolve
from cdod.features import load_preset

FIXTURES = Path(__file__).parent / "fixtures"

PAIRS = {
    "cd1/od1": ("cd1.cd", "od1.od"),
    "cd1p/od1": ("cd1p.cd", "od1.od"),
    "cd2/od2": ("cd2.cd", "od2.od"),
    "cd1/empty": ("cd1.cd", "empty.od"),
    "cd2/od1": ("cd2.cd", "od1.od"),
    "cd2/empty": ("cd2.cd", "empty.od"),
}


def load_pair(cd_file: str, od_file: str):
    return resolve(read_cd(FIXTURES / cd_file), read_od(FIXTURES / od_file))


@pytest.fixture
def cd2_od2():
    return load_pair("cd2.cd", "od2.od")


@pytest.fixture
def cd1_od1():
    return load_pair("cd1.cd", "od1.od")


@pytest.fixture
def elicit():
    return load_preset("elicit")


@pytest.fixture
def testing():
    return load_preset("testing")


@pytest.fixture
def codegen():
    return load_preset("codegen")


@pytest.fixture
def evolve():
    return load_preset("evolve")


# (pair, preset, expected verdict) for closed scopes
SCENARIOS = [
    ("cd2/od2", "elicit", "CONSISTENT"),
    ("cd2/od2", "testing", "INCONSISTENT"),
    ("cd1/od1", "elicit", "CONSISTENT"),
    ("cd1/od1", "testing", "CONSISTENT"),
    ("cd1p/od1", "evolve", "CONSISTENT"),
    ("cd1p/od1", "testing", "INCONSISTENT"),
    ("cd2/od1", "elicit", "CONSISTENT"),
    ("cd2/od1", "testing", "INCONSISTENT"),
    ("cd1/empty", "codegen", "CONSISTENT"),
    ("cd1/empty", "testing", "INCONSISTENT"),
]
