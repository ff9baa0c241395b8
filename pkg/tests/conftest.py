"""
Shared fixtures
"""
import logging

import numpy as np
import pytest

from services.voronoi_service import constant_weights, random_weights


@pytest.fixture
def uniform_weights():
    """d = 1: the uniform measure on S_n, p_n = 1"""
    return constant_weights(1, 2000)


@pytest.fixture
def cesaro_weights():
    """d = 2: p_n = n + 1"""
    return constant_weights(2, 2000)


@pytest.fixture
def bumpy_weights():
    return random_weights(0.5, 2.5, 8000, seed=17)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def restore_logging():
    """configure_logging replaces root handlers; put them back afterwards"""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)
