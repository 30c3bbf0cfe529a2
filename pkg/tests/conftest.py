import pytest

from epistemic import build_counterfactual
from epistemic import d1 as make_d1


@pytest.fixture(scope="session")
def d1():
    return make_d1()


@pytest.fixture(scope="session")
def d1_cf(d1):
    return build_counterfactual(d1)
