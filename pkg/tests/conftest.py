"""Shared fixtures for the channel_compare test suite."""

import numpy as np
import pytest

from channel_compare.core.models import Alphabet, Channel, JointDistribution, ProbVector
from channel_compare.scenarios.library import (
    BINARY,
    TERNARY,
    and_coarse_graining,
    example_and,
    example_and_deterministic,
    example_pregarbling,
)


def bsc(epsilon: float) -> Channel:
    return Channel(input=BINARY, output=BINARY, matrix=[[1 - epsilon, epsilon], [epsilon, 1 - epsilon]])


def random_channel(rng: np.random.Generator, n_inputs: int, n_outputs: int) -> Channel:
    matrix = rng.dirichlet(np.ones(n_outputs), size=n_inputs).T
    return Channel(input=Alphabet.range(n_inputs), output=Alphabet.range(n_outputs), matrix=matrix)


def random_joint(rng: np.random.Generator, n_s: int = 2, n_x1: int = 2, n_x2: int = 2) -> JointDistribution:
    mass = rng.dirichlet(np.ones(n_s * n_x1 * n_x2)).reshape(n_s, n_x1, n_x2)
    return JointDistribution(s=Alphabet.range(n_s), x1=Alphabet.range(n_x1), x2=Alphabet.range(n_x2), mass=mass)


@pytest.fixture
def binary():
    return BINARY


@pytest.fixture
def ternary():
    return TERNARY


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def pregarbling():
    return example_pregarbling()


@pytest.fixture
def and_example():
    return example_and()


@pytest.fixture
def and_deterministic():
    return example_and_deterministic()


@pytest.fixture
def and_f():
    return and_coarse_graining()


@pytest.fixture
def and_prior():
    """The prior (3/8, 3/8, 1/4) on S of the AND example."""
    return ProbVector(alphabet=TERNARY, mass=[0.375, 0.375, 0.25])
