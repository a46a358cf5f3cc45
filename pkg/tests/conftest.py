import pytest

from qcournot.model import EntangledGame, ModelParams


@pytest.fixture
def params():
    return ModelParams(a=3.0, b=5.0, d=10.0)


@pytest.fixture
def game_at(params):
    def make(gamma):
        return EntangledGame(params, gamma)
    return make
