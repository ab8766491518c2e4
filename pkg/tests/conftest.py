import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dofp.randomtime import DistributedOrder


@pytest.fixture
def ref_order() -> DistributedOrder:
    """The reference parameter set used throughout the asymptotic checks."""
    return DistributedOrder(nu1=0.4, nu2=0.8, n1=0.5, lam=1.0)


@pytest.fixture
def unit_rate_order() -> DistributedOrder:
    return DistributedOrder(nu1=0.4, nu2=0.8, n1=0.5, lam=1.0)
