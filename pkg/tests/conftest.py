import pytest

from sphlaplace.coefficients import CoeffTable


@pytest.fixture(scope="session")
def table60():
    # one build serves every test; rows are identical for any l_max >= l
    return CoeffTable.build(60)
