import numpy as np
import pytest
from hypothesis import strategies as st

GRID = [round(0.1 * k, 1) for k in range(1, 10)]

ACCEPTANCE_LINES: list[str] = []

overlaps = st.floats(min_value=0.02, max_value=0.98, allow_nan=False)


def random_hermitian(rng, n, scale=1.0):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (a + a.conj().T) / 2


def random_psd(rng, n, rank=None):
    rank = n if rank is None else rank
    b = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    return b @ b.conj().T


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
