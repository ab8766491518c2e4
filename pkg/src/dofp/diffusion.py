"""Brownian motion run on the two-order random clock: density by
subordination, Fourier transform, closed-form moments, the
retardation/acceleration regime report, and the governing-equation
residual in Fourier space.

The rate parameter is pinned to 1 in this module (the governing equation
is stated that way) and the Gaussian kernel carries infinitesimal variance
2, so the order-one reduction is the classical heat kernel exp(-x^2/(4t)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .config import DEFAULTS
from .errors import DomainError, QuadratureError
from .laplace import caputo_derivative
from .poisson import _phi, phi_on_grid
from .randomtime import DistributedOrder, time_density, time_moment
from .specfun import DEFAULT_CONTROL, SeriesControl, _gml, gamma_fn


def _require_unit_rate(p: DistributedOrder):
    if p.lam != 1.0:
        raise DomainError(
            "diffusion formulas are stated for rate 1; construct the "
            "DistributedOrder with lam=1 instead of rescaling silently")


@dataclass(frozen=True)
class DiffusionPoint:
    """A space-time evaluation point for the subordinated density."""

    x: float
    t: float
    p: DistributedOrder

    def __post_init__(self):
        if not self.t > 0:
            raise DomainError("t must be positive")
        _require_unit_rate(self.p)


def density(pt: DiffusionPoint, *, quad_limit: int = 120,
            ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Subordinated density: Gaussian kernel of variance 2y mixed against
    the random-time density.

    Even in x by construction (the kernel sees |x| only).  The square-root
    substitution y = u^2 removes the integrable 1/sqrt(y) endpoint
    singularity before quadrature.
    """
    p, t = pt.p, pt.t
    x2 = pt.x * pt.x
    if p.is_single_order and p.effective_order == 1.0:
        # deterministic clock: the mixture collapses onto the Gaussian
        return math.exp(-x2 / (4.0 * t)) / math.sqrt(4.0 * math.pi * t)
    pref = 1.0 / math.sqrt(4.0 * math.pi)

    def integrand(u: float) -> float:
        if u <= 0.0:
            return 0.0
        y = u * u
        ex = -x2 / (4.0 * y)
        if ex < -745.0:
            return 0.0
        return 2.0 * pref * math.exp(ex) * time_density(p, y, t, "auto", ctl)

    # scan outward until the density tail has unambiguously died
    mean = time_moment(p, 1, t)
    hi = max(4.0 * math.sqrt(mean), 1.0)
    while integrand(hi) > 1e-16 and hi < 1e4:
        hi *= 2.0
    total = 0.0
    esta = 0.0
    for a, b in ((0.0, hi / 4.0), (hi / 4.0, hi)):
        val, err = quad(integrand, a, b, limit=quad_limit,
                        epsabs=1e-12, epsrel=1e-10)
        total += val
        esta += abs(err)
    if not np.isfinite(total) or esta > 1e-6 * (1.0 + abs(total)):
        raise QuadratureError(f"subordination quadrature failed at x={pt.x}, t={t}")
    return max(total, 0.0)


def fourier_transform(theta: float, t: float, p: DistributedOrder,
                      ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Spatial Fourier transform of the density: the generating-function
    machinery evaluated with the squared frequency in place of the count
    argument (shared code path, pinned by test).
    """
    _require_unit_rate(p)
    if not t > 0:
        raise DomainError("t must be positive")
    return _phi(p, theta * theta, t, ctl)


def moment(p: DistributedOrder, k: int, t: float,
           ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """k-th moment of the subordinated process: odd moments vanish, even
    moments are the two-GML closed form.
    """
    _require_unit_rate(p)
    if not (isinstance(k, int) and k >= 0):
        raise DomainError("k must be a nonnegative integer")
    if not t > 0:
        raise DomainError("t must be positive")
    if k == 0:
        return 1.0
    if k % 2 == 1:
        return 0.0
    h = k // 2
    fact = math.factorial(k)
    if p.is_single_order:
        nu = p.effective_order
        return fact * t ** (nu * h) / gamma_fn(nu * h + 1.0)
    delta = p.nu2 - p.nu1
    x = p.n1 * t ** delta / p.n2
    g1 = _gml(delta, p.nu2 * h + delta + 1.0, h + 1.0, -x, ctl)
    g2 = _gml(delta, p.nu2 * h + 1.0, h + 1.0, -x, ctl)
    return fact * (t ** p.nu2 / p.n2) ** h * (p.n1 * t ** delta / p.n2 * g1 + g2)


@dataclass(frozen=True)
class RegimeReport:
    """Asymptotic mean-square exponents and prefactors of the subordinated
    process and of the random clock itself (the squared-operator process),
    with the spreading-regime label of the latter.
    """

    small_t_exponent_diffusion: float   # nu2
    large_t_exponent_diffusion: float   # nu1
    small_t_exponent_time: float        # 2 nu2
    large_t_exponent_time: float        # 2 nu1
    small_t_prefactor_diffusion: float
    large_t_prefactor_diffusion: float
    small_t_prefactor_time: float
    large_t_prefactor_time: float
    label: str


def regime_report(p: DistributedOrder) -> RegimeReport:
    """Classify the squared-operator process's spreading behaviour.

    Both exponents below 1 (orders below 1/2): the slow-spreading character
    is emphasized.  Orders straddling 1/2: mixed.  Both above 1/2: the
    mean-square displacement beats linear growth at both ends
    (acceleration).
    """
    _require_unit_rate(p)
    nu1, nu2 = p.nu1, p.nu2
    if nu1 > 0.5:
        label = "acceleration"
    elif nu2 > 0.5:
        label = "mixed"
    else:
        label = "retardation-emphasized"
    return RegimeReport(
        small_t_exponent_diffusion=nu2,
        large_t_exponent_diffusion=nu1,
        small_t_exponent_time=2.0 * nu2,
        large_t_exponent_time=2.0 * nu1,
        small_t_prefactor_diffusion=2.0 / (p.n2 * gamma_fn(1.0 + nu2)),
        large_t_prefactor_diffusion=2.0 / (p.n1 * gamma_fn(1.0 + nu1)),
        small_t_prefactor_time=2.0 / (p.n2 ** 2 * gamma_fn(1.0 + 2.0 * nu2)),
        large_t_prefactor_time=2.0 / (p.n1 ** 2 * gamma_fn(1.0 + 2.0 * nu1)),
        label=label,
    )


def log_slope(fn, t: float, rel_step: float = 0.25) -> float:
    """Centered log-log slope of fn at t (finite-difference oracle used by
    the regime checks).
    """
    lo, hi = t * (1.0 - rel_step), t * (1.0 + rel_step)
    return (math.log(fn(hi)) - math.log(fn(lo))) / (math.log(hi) - math.log(lo))


def equation_residual(p: DistributedOrder, theta: float, t: float,
                      *, n: int = 2048,
                      ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """L1-scheme residual of the Fourier-space governing equation at
    frequency theta and time t.
    """
    _require_unit_rate(p)
    if theta == 0.0:
        return 0.0
    z = theta * theta
    grid = np.linspace(0.0, t, n + 1)
    g = phi_on_grid(p, z, grid, ctl)
    d1 = caputo_derivative(g, p.nu1, t) if p.n1 > 0 and p.nu1 < 1.0 else 0.0
    d2 = caputo_derivative(g, p.nu2, t) if p.n2 > 0 and p.nu2 < 1.0 else 0.0
    extra = 0.0
    if p.nu2 == 1.0 and p.n2 > 0:
        h = t / n
        extra = p.n2 * (1.5 * g[-1] - 2.0 * g[-2] + 0.5 * g[-3]) / h
    return abs(p.n1 * d1 + p.n2 * d2 + extra + z * g[-1])
