import pytest

from app.services.classifier_service import analyze
from app.services.expression_parser import parse_constraint, parse_polynomial
from app.services.tangency_service import FeasibleSet
from tests.helpers import MOTZKIN, QUARTIC, RADIAL, SADDLE_CUBIC, VALLEY


@pytest.fixture(scope="session")
def motzkin():
    return parse_polynomial(MOTZKIN)


@pytest.fixture(scope="session")
def motzkin_report(motzkin):
    return analyze(motzkin)


@pytest.fixture(scope="session")
def saddle_report():
    return analyze(parse_polynomial(SADDLE_CUBIC))


@pytest.fixture(scope="session")
def valley():
    return parse_polynomial(VALLEY)


@pytest.fixture(scope="session")
def valley_report(valley):
    return analyze(valley)


@pytest.fixture(scope="session")
def radial_report():
    return analyze(parse_polynomial(RADIAL))


@pytest.fixture(scope="session")
def quartic_report():
    return analyze(parse_polynomial(QUARTIC))


@pytest.fixture(scope="session")
def parabola():
    return FeasibleSet.curve(parse_constraint("y = x^2"))
