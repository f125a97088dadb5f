import pytest
from hypothesis import settings

from hyperam_app.core.exact import make_params


# exact arithmetic at order 64 and above runs past the default per-example deadline
settings.register_profile("hyperam", deadline=None)
settings.load_profile("hyperam")


@pytest.fixture
def k_case():
    """(1/2, 1/2, 1): F is (2/pi) K(sqrt(x))."""
    return make_params("1/2", "1/2", "1")


@pytest.fixture
def r1_triple():
    return make_params(1, 1, 3)


@pytest.fixture
def r2_triple():
    return make_params("1/2", 2, "8/5")


@pytest.fixture
def neither_triple():
    return make_params(2, 2, 3)
