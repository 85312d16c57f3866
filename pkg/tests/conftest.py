import pytest

from typea_pi0.lparam import make_setup
from typea_pi0.weyl import Perm


@pytest.fixture(scope="session")
def sl6():
    return make_setup(6, 7, "1/6")


@pytest.fixture
def P():
    def parse(text, n=6):
        return Perm.parse(text, n)

    return parse
