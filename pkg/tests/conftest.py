# tests/conftest.py
import os
import sys

import numpy as np
import pytest

# Add the parent directory (project root) to sys.path
ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from src.algebra.ring_core import parse_ring  # noqa: E402
from src.groups.hermitian_form import parse_delta  # noqa: E402
from src.groups.ortho_group import OrthoGroup  # noqa: E402
from src.groups.unitary_group import UnitaryGroup  # noqa: E402

GOLDEN_DIR = os.path.join(ROOT, "tests", "golden")


@pytest.fixture(scope="session")
def z5():
    return parse_ring("zmod:5")


@pytest.fixture(scope="session")
def z8():
    return parse_ring("zmod:8")


@pytest.fixture(scope="session")
def z3():
    return parse_ring("zmod:3")


@pytest.fixture(scope="session")
def gauss3():
    """(Z/3)[t]/(t^2 + 1) with t -> -t."""
    return parse_ring("quadext:3:2", "conj")


@pytest.fixture(scope="session")
def ortho5(z5):
    return OrthoGroup(z5, 3)


@pytest.fixture(scope="session")
def ortho8(z8):
    return OrthoGroup(z8, 3)


@pytest.fixture(scope="session")
def unitary3(z3):
    return UnitaryGroup(z3, 3, parse_delta(z3, "max"))


@pytest.fixture(scope="session")
def unitary_gauss(gauss3):
    return UnitaryGroup(gauss3, 3, parse_delta(gauss3, "min"))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
