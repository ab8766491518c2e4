"""One-sided (completely asymmetric) stable laws and the folded
time-fractional diffusion density they generate.

Parametrization: the density of ``StableParams(alpha, sigma, mu)`` has
Laplace transform exp(-sigma^alpha * eta^alpha / cos(pi*alpha/2) - mu*eta),
so the natural internal quantity is the unit-scale factor
c = sigma / cos(pi*alpha/2)^(1/alpha) with X = c*S + mu, S standard.

``sigma == 0`` is the explicit point-mass variant (mass at mu); the delta
reductions of the degenerate mixture components are then exact rather than
numerical limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import kernels
from .config import DEFAULTS, stable_series_xmin
from .errors import DomainError, QuadratureError
from .specfun import DEFAULT_CONTROL, SeriesControl, gamma_fn, wright


@dataclass(frozen=True)
class StableParams:
    """Index, skew (fixed at 1), shift and scale of a one-sided stable law."""

    alpha: float
    sigma: float
    mu: float = 0.0
    beta_skew: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise DomainError("alpha must lie in (0, 1)")
        if self.beta_skew != 1.0:
            raise DomainError("only the fully skewed case beta_skew = 1 is supported")
        if self.sigma < 0.0:
            raise DomainError("sigma must be nonnegative (0 = point mass)")
        if self.mu < 0.0:
            raise DomainError("mu must be nonnegative")

    @classmethod
    def point_mass(cls, mu: float, alpha: float = 0.5) -> "StableParams":
        """Degenerate variant: all mass at mu (sigma = 0)."""
        return cls(alpha=alpha, sigma=0.0, mu=mu)

    @property
    def is_point_mass(self) -> bool:
        return self.sigma == 0.0

    @property
    def unit_scale(self) -> float:
        """c such that X = c*S + mu with S the unit one-sided stable."""
        return self.sigma / math.cos(math.pi * self.alpha / 2.0) ** (1.0 / self.alpha)

    def laplace(self, eta):
        """Closed-form Laplace transform; accepts complex eta."""
        cosf = math.cos(math.pi * self.alpha / 2.0)
        return np.exp(-self.sigma ** self.alpha * eta ** self.alpha / cosf
                      - self.mu * eta)


@dataclass(frozen=True)
class FellerParams:
    """Canonical Feller (index, scale) pair of the same law."""

    gamma_feller: float
    zeta: float

    def __post_init__(self):
        if not self.zeta > 0:
            raise DomainError("zeta must be positive")

    @classmethod
    def from_stable(cls, p: StableParams) -> "FellerParams":
        if p.is_point_mass:
            raise DomainError("point mass has no Feller representation")
        cosf = math.cos(math.pi * p.alpha / 2.0)
        return cls(gamma_feller=p.alpha, zeta=p.sigma ** p.alpha / cosf)


def _std_pdf(x: float, alpha: float, ctl: SeriesControl) -> float:
    val, _ = kernels.stable_std(
        x, alpha, ctl.rel_tol, ctl.max_terms, stable_series_xmin(alpha),
        DEFAULTS.stable_saddle_exponent, DEFAULTS.talbot_nodes)
    return val


def stable_pdf(p: StableParams, x: float,
               ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Density at x; zero off the support (x <= mu).

    Series evaluation after rescaling to unit scale, with an automatic
    switch to transform inversion in the mid range and to the saddle-point
    exponential form in the deep left tail where the series degrades.
    """
    if p.is_point_mass:
        raise DomainError("point-mass variant has no density; test mu directly")
    if x <= p.mu:
        return 0.0
    c = p.unit_scale
    return _std_pdf((x - p.mu) / c, p.alpha, ctl) / c


def stable_sample(p: StableParams, plan) -> np.ndarray:
    """i.i.d. samples, deterministic for a given plan.seed.

    Uses the one-sided specialization of the Chambers-Mallows-Stuck
    construction (angular-factor form), then scale/shift.
    """
    if plan.count < 1:
        raise DomainError("plan.count must be >= 1")
    rng = np.random.default_rng(plan.seed)
    if p.is_point_mass:
        return np.full(plan.count, p.mu)
    u = rng.uniform(0.0, math.pi, plan.count)
    w = rng.standard_exponential(plan.count)
    return p.mu + p.unit_scale * kernels.kanter_std(p.alpha, u, w)


def stable_convolve(p1: StableParams, p2: StableParams, w: float,
                    quad_n: int = 200) -> float:
    """Density of the sum X1 + X2 at w by adaptive quadrature.

    Degenerate components reduce exactly to a shift of the other density.
    """
    if p1.mu != 0.0 or p2.mu != 0.0:
        raise DomainError("convolution requires mu = 0 components")
    if not w > 0:
        return 0.0
    if p1.is_point_mass and p2.is_point_mass:
        raise DomainError("both components degenerate: convolution is a point mass")
    if p1.is_point_mass:
        return stable_pdf(p2, w)
    if p2.is_point_mass:
        return stable_pdf(p1, w)
    ctl = DEFAULT_CONTROL

    def integrand(x: float) -> float:
        return stable_pdf(p1, w - x, ctl) * stable_pdf(p2, x, ctl)

    val, err = quad(integrand, 0.0, w, limit=quad_n)
    if not np.isfinite(val) or (val > 0 and err > 1e-6 * (1.0 + val)):
        raise QuadratureError(f"convolution quadrature failed at w={w}")
    return max(val, 0.0)


def m_wright(nu: float, x: float, ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Mainardi's M function (the Wright density kernel) on x >= 0.

    Series where the roundoff budget allows; for larger arguments the value
    is recovered from the unit-scale stable density through the
    inverse-process identity M_nu(x) = x^(-1-1/nu) p(x^(-1/nu)) / nu, whose
    stable factor is evaluated in its own good regime.
    """
    if not (0.0 < nu < 1.0):
        raise DomainError("nu must lie in (0, 1)")
    if x < 0.0:
        raise DomainError("x must be nonnegative")
    if x == 0.0:
        return 1.0 / gamma_fn(1.0 - nu)
    val, mx, n, status = kernels.wright_series(
        -nu, 1.0 - nu, -x, ctl.abs_tol, ctl.rel_tol, ctl.max_terms, True)
    if status == kernels.OK:
        noise = mx * np.finfo(float).eps * math.sqrt(n + 1.0)
        if noise <= DEFAULTS.cancel_guard * (ctl.abs_tol + ctl.rel_tol * abs(val)):
            return val
    arg = x ** (-1.0 / nu)
    return x ** (-1.0 - 1.0 / nu) * _std_pdf(arg, nu, ctl) / nu


def folded_diffusion_density(alpha: float, c: float, y: float, t: float,
                             ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Folded single-order time-fractional diffusion density.

    Nonzero only for y >= 0; for alpha = 1/2, c = 1 this is the folded heat
    kernel exp(-y^2/(4t)) / sqrt(pi*t).
    """
    if not (0.0 < alpha < 1.0):
        raise DomainError("alpha must lie in (0, 1)")
    if not (c > 0 and t > 0):
        raise DomainError("c and t must be positive")
    if y < 0.0:
        return 0.0
    s = c * t ** alpha
    return m_wright(alpha, y / s, ctl) / s


def mixture_component(nu: float, weight: float, lam: float, y: float) -> StableParams:
    """Stable component paired with the folded density in the random-time
    convolution: index nu, scale fixed so the Laplace exponent is
    (weight * y / lam) * eta^nu.
    """
    if y < 0:
        raise DomainError("y must be nonnegative")
    sigma = (weight * y * math.cos(math.pi * nu / 2.0) / lam) ** (1.0 / nu) if y > 0 else 0.0
    if sigma == 0.0:
        return StableParams.point_mass(0.0, alpha=nu)
    return StableParams(alpha=nu, sigma=sigma)
