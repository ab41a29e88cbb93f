"""Shared problem fixtures"""

import pytest

from .problems import make_problem


@pytest.fixture
def tiny_problem():
    return make_problem(seed=1)


@pytest.fixture
def small_problem():
    """T = 60 W so that up to 8 segments of length >= W fit"""
    return make_problem(seed=2, n_times=600, width=10, n_atoms=3, n_channels=2, rho=0.02)
