import pytest

from rscm import Field, RsCode, make_constellation


@pytest.fixture(scope="session")
def field8() -> Field:
    return Field(3)


@pytest.fixture(scope="session")
def rs73(field8) -> RsCode:
    code = RsCode(field8, 7, 3)
    code.codebook()  # warm the cache once for the whole session
    return code


@pytest.fixture(scope="session")
def psk8():
    return make_constellation("psk8@1")
