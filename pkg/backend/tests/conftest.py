"""
Shared fixtures - the testing environment must be selected before app modules load settings
"""

import os

os.environ["ENVIRONMENT"] = "testing"

import random  # noqa: E402
from fractions import Fraction  # noqa: E402

import pytest  # noqa: E402

from app.services.laurent import QValue  # noqa: E402
from app.services.verification import SuiteBounds  # noqa: E402


@pytest.fixture
def q2() -> QValue:
    return QValue(Fraction(2))


@pytest.fixture
def q32() -> QValue:
    return QValue(Fraction(3, 2))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240521)


@pytest.fixture
def small_bounds() -> SuiteBounds:
    """Bounds small enough to run every suite in a few seconds"""
    return SuiteBounds(
        max_word_len=2,
        max_d=2,
        random_samples=40,
        random_word_len=4,
        oracle_samples=40,
        oracle_word_len=5,
        independence_word_len=2,
        seed=7,
    )
