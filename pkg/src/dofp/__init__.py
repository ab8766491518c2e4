"""Distributed-order fractional Poisson process and diffusion.

Core objects: :class:`~dofp.randomtime.DistributedOrder` (the two-point
order mixture), the random-time density/moments/sampler in
:mod:`~dofp.randomtime`, the counting process in :mod:`~dofp.poisson`, the
subordinated diffusion in :mod:`~dofp.diffusion`, and the supporting
special functions, stable laws and Laplace machinery underneath.
"""

from ._jit import NUMBA_ENABLED
from .randomtime import DistributedOrder, SamplePlan
from .specfun import GmlArgs, SeriesControl

__version__ = "0.1.0"

__all__ = [
    "DistributedOrder",
    "SamplePlan",
    "SeriesControl",
    "GmlArgs",
    "NUMBA_ENABLED",
    "__version__",
]
