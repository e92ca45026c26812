import pytest

from fracjump import Modulus, SquareMatrix, build_jump, companion_matrix
from fracjump.poly import Polynomial

# worked 3x3 automorphism over F_101 used throughout
EXAMPLE_MATRIX_ROWS = [[1, 0, 2], [0, 3, 4], [4, 2, 3]]


@pytest.fixture(scope="session")
def m101():
    return Modulus(101)


@pytest.fixture(scope="session")
def example_matrix(m101):
    return SquareMatrix(EXAMPLE_MATRIX_ROWS, m101)


@pytest.fixture(scope="session")
def example_jump(example_matrix):
    return build_jump(example_matrix)


@pytest.fixture(scope="session")
def jump_5_2():
    """n=2 generator over F_5 (companion of T^3 + 4T^2 + 4T + 4)."""
    return build_jump(companion_matrix(Polynomial([4, 4, 4, 1], Modulus(5))))


@pytest.fixture(scope="session")
def jump_7_2():
    """n=2 generator over F_7 (companion of T^3 + 6T^2 + 5T + 5)."""
    return build_jump(companion_matrix(Polynomial([5, 5, 6, 1], Modulus(7))))


@pytest.fixture(scope="session")
def jump_5_3():
    """n=3 generator over F_5 (companion of T^4 + 2T^3 + 4T^2 + 3T + 3)."""
    return build_jump(companion_matrix(Polynomial([3, 3, 4, 2, 1], Modulus(5))))
