"""Special functions: gamma, Mittag-Leffler (two- and three-parameter),
Wright, and Kummer 1F1, with the truncation policy shared by every series
in the package.

All evaluators are pure and reentrant.  Real arguments only; the only place
complex arithmetic appears is inside the transform-inversion fallbacks in
:mod:`dofp.kernels`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import kernels
from .config import DEFAULTS
from .errors import (CancellationError, ConvergenceError, DomainError,
                     OverflowRangeError, PoleError, QuadratureError)


@dataclass(frozen=True)
class SeriesControl:
    """Truncation and tolerance policy for infinite-series evaluation."""

    abs_tol: float = DEFAULTS.abs_tol
    rel_tol: float = DEFAULTS.rel_tol
    max_terms: int = DEFAULTS.max_terms
    summation_mode: str = DEFAULTS.summation_mode

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("abs_tol and rel_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")
        if self.summation_mode not in ("plain", "compensated"):
            raise DomainError(f"unknown summation_mode {self.summation_mode!r}")

    @property
    def compensated(self) -> bool:
        return self.summation_mode == "compensated"


DEFAULT_CONTROL = SeriesControl()


@dataclass(frozen=True)
class GmlArgs:
    """Arguments of the three-parameter Mittag-Leffler function."""

    alpha: float
    beta: float
    gamma: float
    z: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError("alpha must be positive")
        if not self.gamma > 0:
            raise DomainError("gamma must be positive")


def gamma_fn(x: float) -> float:
    """Gamma function on the real line, poles and overflow signalled apart."""
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"gamma pole at x={x}")
    try:
        return math.gamma(x)
    except OverflowError as exc:
        raise OverflowRangeError(f"gamma({x}) overflows double precision") from exc


def _raise_for_status(status: int, what: str, n: int | None = None):
    if status == kernels.OVERFLOW:
        raise OverflowRangeError(f"{what}: intermediate term overflows")
    if status == kernels.CANCELLED:
        raise CancellationError(
            f"{what}: alternating-series digit loss exceeds the tolerance")
    if status == kernels.NO_CONVERGENCE:
        extra = f" within {n} terms" if n else ""
        raise ConvergenceError(f"{what}: series did not converge{extra}")


def _gml(alpha: float, beta: float, gam: float, z: float,
         ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Internal evaluator used throughout the package (no GmlArgs boxing).

    Negative arguments outside the series' roundoff budget are routed
    through inversion of the closed-form transform; positive arguments are
    pure series (any cancellation-free regime).
    """
    if z < 0.0:
        val, status = kernels.gml_neg_auto(
            alpha, beta, gam, -z, ctl.abs_tol, ctl.rel_tol, ctl.max_terms,
            DEFAULTS.talbot_nodes, DEFAULTS.cancel_guard)
        if status in (kernels.OK, kernels.USED_INVERSION):
            return val
        _raise_for_status(status, f"E^{gam}_({alpha},{beta})({z})", ctl.max_terms)
    val, mx, n, status = kernels.gml_series(
        alpha, beta, gam, z, ctl.abs_tol, ctl.rel_tol, ctl.max_terms,
        ctl.compensated)
    _raise_for_status(status, f"E^{gam}_({alpha},{beta})({z})", n)
    return val


def gml(args: GmlArgs, ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Three-parameter (generalized) Mittag-Leffler function.

    Series evaluation with term recurrence in log space; for negative
    arguments whose series would lose more digits than the tolerance
    permits, the value is recovered from its Laplace-transform pair
    instead (0 < alpha < 1), so large negative arguments are fine.
    """
    return _gml(args.alpha, args.beta, args.gamma, args.z, ctl)


def mittag_leffler(alpha: float, beta: float, z: float,
                   ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Two-parameter Mittag-Leffler function E_{alpha,beta}(z)."""
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    return _gml(alpha, beta, 1.0, z, ctl)


def ml_asymptotic_tail(alpha: float, beta: float, gam: float, c: float,
                       t: float) -> float:
    """Leading algebraic tail of E^gam_{alpha,beta}(-c t^alpha), t -> inf."""
    return 1.0 / (c ** gam * t ** (alpha * gam) * gamma_fn(beta - alpha * gam))


def ml_small_argument(alpha: float, beta: float, gam: float, c: float,
                      t: float) -> float:
    """Two-term small-t form of E^gam_{alpha,beta}(-c t^alpha)."""
    return 1.0 / gamma_fn(beta) - c * t ** alpha * gam / gamma_fn(beta + alpha)


def gml_integral_rep(k: int, nu: float, beta: float, c: float, t: float,
                     *, quad_limit: int = 200) -> float:
    """E^k_{nu,beta}(-c t^nu) by quadrature of its real-line spectral
    integral (the two conjugate contributions combined into one real
    integrand).

    The integrand behaves like r^(nu*k - beta) at the origin, so the
    representation itself requires beta < nu*k + 1; larger beta is reduced
    to that strip by integrating the lower-beta representation in time
    (one extra quadrature level per unit of beta).
    """
    if not (isinstance(k, int) and k >= 1):
        raise DomainError("k must be a positive integer")
    if not (0.0 < nu < 1.0):
        raise DomainError("nu must lie in (0, 1)")
    if not (c > 0.0 and t > 0.0):
        raise DomainError("c and t must be positive")
    if beta >= nu * k + 1.0 - 1e-12:
        # outside the representation's validity strip; lower the second
        # parameter through the time-integration identity
        # E^k_{nu,beta}(-c t^nu) = int_0^1 u^(beta-2) E^k_{nu,beta-1}(-c (tu)^nu) du
        def inner(u: float) -> float:
            if u <= 0.0:
                return 0.0
            return u ** (beta - 2.0) * gml_integral_rep(
                k, nu, beta - 1.0, c, t * u, quad_limit=quad_limit)

        val, err = quad(inner, 0.0, 1.0, limit=quad_limit,
                        epsabs=1e-11, epsrel=1e-10)
        if not np.isfinite(val):
            raise QuadratureError("order-lowering reduction diverged")
        return val

    # scale-free variable: the exponential factor keeps O(1) support for
    # every t, and the argument enters only through w = c * t^nu
    w = c * t ** nu
    rot = complex(math.cos(math.pi * nu), -math.sin(math.pi * nu))
    phase = complex(math.cos(math.pi * beta), math.sin(math.pi * beta))

    def integrand(z: float) -> float:
        if z <= 0.0:
            return 0.0
        shifted = z ** nu + w * rot
        num = (phase * shifted ** k).imag
        den = abs(shifted) ** (2 * k)
        return z ** (nu * k - beta) * math.exp(-z) * num / den

    # the integrand can concentrate at z ~ w^2 (with a slow algebraic tail
    # across every decade up to O(1)) when the leading origin term cancels,
    # so cut geometrically from that scale upward
    cuts = {1.0, 10.0}
    lo = w * w
    while 0.0 < lo < 1.0:
        cuts.add(lo)
        lo *= 10.0
    edges = [0.0] + sorted(cuts) + [np.inf]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, err = quad(integrand, a, b, limit=quad_limit,
                        epsabs=1e-12, epsrel=1e-11)
        total += val
        if not np.isfinite(val):
            raise QuadratureError("spectral integral diverged numerically")
    return total / math.pi


def wright(alpha: float, beta: float, x: float,
           ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Wright function, alpha > -1.

    For alpha < 0 with x < 0 the terms alternate violently, so compensated
    summation is forced and a running roundoff estimate is kept; if the
    estimated relative error exceeds rel_tol a :class:`CancellationError`
    is raised rather than returning a silently wrong value.
    """
    if not alpha > -1.0:
        raise DomainError("alpha must be > -1")
    compensated = ctl.compensated or (alpha < 0.0 and x < 0.0)
    val, mx, n, status = kernels.wright_series(
        alpha, beta, x, ctl.abs_tol, ctl.rel_tol, ctl.max_terms, compensated)
    _raise_for_status(status, f"W_({alpha},{beta})({x})", n)
    if alpha < 0.0:
        noise = mx * np.finfo(float).eps * math.sqrt(n + 1.0)
        if noise > ctl.abs_tol + ctl.rel_tol * abs(val):
            raise CancellationError(
                f"W_({alpha},{beta})({x}): estimated roundoff {noise:.2e} "
                "exceeds the requested tolerance")
    return val


def kummer_1f1(a: float, c: float, z: float,
               ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Confluent hypergeometric function 1F1(a; c; z) by direct series."""
    if c <= 0.0 and c == math.floor(c):
        raise PoleError(f"1F1 undefined at non-positive integer c={c}")
    val, mx, n, status = kernels.kummer_series(
        a, c, z, ctl.abs_tol, ctl.rel_tol, ctl.max_terms, ctl.compensated)
    _raise_for_status(status, f"1F1({a};{c};{z})", n)
    if z < 0.0:
        noise = mx * np.finfo(float).eps * math.sqrt(n + 1.0)
        if noise > ctl.abs_tol + ctl.rel_tol * abs(val):
            raise CancellationError(
                f"1F1({a};{c};{z}): estimated roundoff {noise:.2e} "
                "exceeds the requested tolerance")
    return val
