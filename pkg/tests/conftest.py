import pytest

from delinf.documents import bundled_algebra
from delinf.linfty import LInftyAlgebra


@pytest.fixture(scope="session")
def heis() -> LInftyAlgebra:
    """
    The three dimensional Heisenberg Lie algebra, [X, Y] = Z.
    """
    return bundled_algebra("heis")


@pytest.fixture(scope="session")
def ut4() -> LInftyAlgebra:
    """
    Strictly upper triangular 4x4 matrices.
    """
    return bundled_algebra("ut4")


@pytest.fixture(scope="session")
def abelian_line() -> LInftyAlgebra:
    return bundled_algebra("abelian_line")


@pytest.fixture(scope="session")
def acyclic_pair() -> LInftyAlgebra:
    return bundled_algebra("acyclic_pair")


@pytest.fixture(scope="session")
def dgla_pair() -> LInftyAlgebra:
    return bundled_algebra("dgla_pair")
