import pytest

from topomemo import generators


@pytest.fixture
def hollow_triangle():
    return generators.hollow_triangle()


@pytest.fixture
def filled_triangle():
    return generators.filled_triangle()


@pytest.fixture
def theta():
    return generators.theta_graph()


@pytest.fixture
def theta_filled():
    return generators.theta_filled()


@pytest.fixture
def sphere():
    return generators.sphere_complex()


@pytest.fixture
def torus():
    return generators.torus_complex()


@pytest.fixture
def klein():
    return generators.klein_bottle_complex()


@pytest.fixture
def square_pendant():
    return generators.square_plus_pendant()


@pytest.fixture
def triangle_filtered():
    return generators.triangle_filtration_complex()
