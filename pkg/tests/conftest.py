import pytest
from hypothesis import settings

from threshold_lab import SweepGrid, run_sweep

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def default_rows():
    """One shared evaluation of the built-in grid; several files assert on it."""
    return run_sweep(SweepGrid())
