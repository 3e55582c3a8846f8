from __future__ import annotations

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import settings

from kextremal.algebra import Scalar

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")

# filled in by test_acceptance.py, echoed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


def random_exact_form(rng: np.random.Generator, n: int, p: int, bound: int = 5) -> np.ndarray:
    """Symmetric (p, n, n) object array with small rational entries."""
    out = np.empty((p, n, n), dtype=object)
    for a in range(p):
        for i in range(n):
            for j in range(i, n):
                num = int(rng.integers(-bound, bound + 1))
                den = int(rng.integers(1, bound + 1))
                out[a, i, j] = out[a, j, i] = Scalar(mpq(num, den))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
