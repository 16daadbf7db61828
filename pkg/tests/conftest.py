import sys
from pathlib import Path

import mpmath
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from chaosbreak import SecretKey  # noqa: E402
from oracles import binary_expansion  # noqa: E402

# fixed reference key; its XOR bytes work out to (162, 54, 108, 110)
REFERENCE_KEY = SecretKey(3.98235562892545, 1.34536356538912, 108.54365761256745, 110)

# first 100 binary digits of pi ("11.0010...")
PI_100 = (
    "11001001000011111101101010100010001000010110100011"
    "00001000110100110001001100011001100010100010111000"
)


@pytest.fixture
def ref_key():
    return REFERENCE_KEY


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def e_bits():
    """First 10**6 binary digits of e, integer part ("10") included."""
    return binary_expansion(mpmath.e, 1_000_000)


# (criterion, passed, detail) rows filled in by test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
