import pytest

from jetvar.frontend import parse
from jetvar.frontend.runner import build, fixture_text


@pytest.fixture(scope="session")
def laplace_built():
    return build(parse(fixture_text("laplace")))


@pytest.fixture(scope="session")
def wave_built():
    return build(parse(fixture_text("wave")))


@pytest.fixture(scope="session")
def pkdv_built():
    return build(parse(fixture_text("pkdv")))


@pytest.fixture(scope="session")
def maxwell_built():
    return build(parse(fixture_text("maxwell")))


@pytest.fixture(scope="session")
def all_built(laplace_built, wave_built, pkdv_built, maxwell_built):
    return {
        "laplace": laplace_built,
        "wave": wave_built,
        "pkdv": pkdv_built,
        "maxwell": maxwell_built,
    }
