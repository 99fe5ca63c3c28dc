# conftest.py
# Shared graded rings and the F -> F^2 negative control for the test-suite.
import pytest

from grading import GradedRing
from semistar import Custom


@pytest.fixture
def R0() -> GradedRing:
    """Q[x, y] with the trivial grading."""
    return GradedRing.of(["x", "y"], [[0, 0]], name="R0")


@pytest.fixture
def R1() -> GradedRing:
    """Q[x, y], deg x = deg y = 1."""
    return GradedRing.of(["x", "y"], [[1, 1]], name="R1")


@pytest.fixture
def R2() -> GradedRing:
    """Q[x, y], deg x = 1, deg y = 2."""
    return GradedRing.of(["x", "y"], [[1, 2]], name="R2")


@pytest.fixture
def Q1() -> GradedRing:
    """Q[x], deg x = 1."""
    return GradedRing.of(["x"], [[1]], name="Q1")


@pytest.fixture
def square_star() -> Custom:
    """F -> F^2, a map that is not a semistar operation."""
    return Custom("F^2", lambda F: F * F)
