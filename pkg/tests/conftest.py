import pytest
from hypothesis import HealthCheck, settings

from qvir.coeffield import FunctionFieldDomain, ParamPoint, RationalDomain, SymbolTable, rat

settings.register_profile(
    "exact",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("exact")


@pytest.fixture(scope="session")
def rational_domain():
    return RationalDomain()


@pytest.fixture(scope="session")
def usq_domain():
    return FunctionFieldDomain(SymbolTable(("u", "s", "Q")))


@pytest.fixture(scope="session")
def us_domain():
    return FunctionFieldDomain(SymbolTable(("u", "s")))


@pytest.fixture(scope="session")
def numeric_point():
    return ParamPoint.numeric(u="2/5", s="3/7", Q="5/3",
                              T1="1/2", T2="1/3", T3="1/5", T4="1/7")


@pytest.fixture(scope="session")
def qtq_numeric():
    return rat(4, 25), rat(9, 49), rat(5, 3)
