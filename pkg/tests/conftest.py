import math

import pytest

from cvdiscord.covariance import StandardForm


def pure_tmsv(n: float = 1.0) -> StandardForm:
    """Pure two-mode squeezed vacuum with A-mode variance n (HALF units)."""
    c = math.sqrt(n * n - 0.25)
    return StandardForm(n, n, c, c)


@pytest.fixture
def tmsv() -> StandardForm:
    return pure_tmsv(1.0)


@pytest.fixture
def vacuum() -> StandardForm:
    return StandardForm(0.5, 0.5, 0.0, 0.0)


@pytest.fixture
def product_thermal() -> StandardForm:
    return StandardForm(1.0, 1.0, 0.0, 0.0)
