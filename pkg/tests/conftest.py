import pytest

from pgkit import build_pg, load_pg32
from pgkit import enumeration as en
from pgkit import kernels
from pgkit import symmetry as sy


@pytest.fixture(scope="session")
def pg32():
    return load_pg32()


@pytest.fixture(scope="session")
def pg32c():
    return build_pg(3, 2)


@pytest.fixture(scope="session")
def spreads(pg32):
    return en.enumerate_spreads(pg32)


@pytest.fixture(scope="session")
def packings(pg32, spreads):
    return en.enumerate_packings(pg32, spreads)


@pytest.fixture(scope="session")
def gens(pg32):
    return sy.generators_for(pg32)


@pytest.fixture(scope="session")
def group32(pg32c):
    return sy.collineation_group(pg32c)


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    return request.param
