import pytest

from lotsampler import SprtConfig


@pytest.fixture
def case_config() -> SprtConfig:
    """The worked sequential setup used throughout: 10% nominal rate,
    15% alternative, symmetric 5% error caps, ceiling 139, early-reject 21."""
    return SprtConfig(p0=0.1, p1=0.15, alpha=0.05, beta=0.05, n_max=139, k_star=21)
