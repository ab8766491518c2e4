"""Hot numeric kernels: series sums, fixed-Talbot cores, stable density.

Scalar kernels are written in numba-compatible Python and jitted when numba
is available (``DOFP_DISABLE_NUMBA`` unset).  The grid entry points
(:func:`stable_std_many`, :func:`phi_grid`) dispatch between jitted loops
and vectorized pure-numpy twins so the package works either way; the
``benchmarks/`` script times both paths.

Status codes returned by the kernels (module constants below): routing and
exception raising happen in the public modules, kernels never raise.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from ._jit import NUMBA_ENABLED, njit

OK = 0
USED_INVERSION = 1
NO_CONVERGENCE = 2
OVERFLOW = 3
CANCELLED = 4
USED_SADDLE = 5

_EPS = 2.220446049250313e-16
_LOG_HUGE = 700.0
_INNER_FLOOR = 1.2e-14  # absolute noise floor of one inner GML/Wright value


# ---------------------------------------------------------------------------
# reciprocal gamma in log form (1/Gamma is entire: poles map to exact zeros)

@njit(cache=True)
def _log_rgamma(g):
    """Return (log|1/Gamma(g)|, sign); sign 0 at non-positive integers."""
    if g > 0.5:
        return -math.lgamma(g), 1.0
    if g <= 0.0 and g == math.floor(g):
        return -_LOG_HUGE, 0.0
    s = math.sin(math.pi * g)
    if s == 0.0:
        return -_LOG_HUGE, 0.0
    sign = 1.0 if s > 0.0 else -1.0
    return math.log(abs(s) / math.pi) + math.lgamma(1.0 - g), sign


# ---------------------------------------------------------------------------
# generalized Mittag-Leffler series  sum_j (gam)_j z^j / (j! Gamma(a j + b))

@njit(cache=True)
def gml_series(alpha, beta, gam, z, abs_tol, rel_tol, max_terms, compensated):
    """Three-parameter series in log space with term-sign tracking.

    Returns (value, max_abs_term, n_terms, status).  gam > 0 assumed.
    """
    s = 0.0
    comp = 0.0
    mx = 0.0
    lpoch = 0.0
    logz = math.log(abs(z)) if z != 0.0 else -_LOG_HUGE
    small = 0
    for j in range(max_terms):
        lrg, srg = _log_rgamma(alpha * j + beta)
        if j == 0:
            lt = lrg
            st = srg
        else:
            lt = lpoch + j * logz - math.lgamma(j + 1.0) + lrg
            st = srg if (z > 0.0 or j % 2 == 0) else -srg
        if lt > _LOG_HUGE:
            return s, mx, j, OVERFLOW
        term = st * math.exp(lt)
        a = abs(term)
        if a > mx:
            mx = a
        if compensated:
            y = term - comp
            t = s + y
            comp = (t - s) - y
            s = t
        else:
            s += term
        if a <= abs_tol + rel_tol * abs(s):
            small += 1
            if small >= 2 and j >= 2:
                return s, mx, j + 1, OK
        else:
            small = 0
        lpoch += math.log(gam + j)
    return s, mx, max_terms, NO_CONVERGENCE


@njit(cache=True)
def gml_talbot(alpha, beta, gam, x, nodes):
    """E^gam_{alpha,beta}(-x) for x >= 0, 0 < alpha < 1, via fixed-Talbot
    inversion of the transform pair s^(alpha*gam-beta) / (s^alpha + x)^gam
    evaluated at unit time.

    Returns (value, roundoff_estimate).
    """
    M = nodes
    r = 2.0 * M / 5.0
    acc = 0.0
    mx = 0.0
    for k in range(M):
        if k == 0:
            s = complex(r, 0.0)
            w = 0.5 * cmath.exp(s)
        else:
            theta = math.pi * k / M
            cot = 1.0 / math.tan(theta)
            s = r * theta * complex(cot, 1.0)
            w = cmath.exp(s) * complex(1.0, theta * (1.0 + cot * cot) - cot)
        F = s ** (alpha * gam - beta) / (s ** alpha + x) ** gam
        contrib = (w * F).real
        if abs(contrib) > mx:
            mx = abs(contrib)
        acc += contrib
    val = 0.4 * acc
    return val, 0.4 * mx * _EPS * M


@njit(cache=True)
def gml_neg_auto(alpha, beta, gam, x, abs_tol, rel_tol, max_terms, nodes, guard):
    """E^gam_{alpha,beta}(-x), x >= 0: series when the roundoff budget allows,
    transform inversion otherwise (only available for 0 < alpha < 1).

    Returns (value, status).
    """
    val, mx, n, st = gml_series(alpha, beta, gam, -x, abs_tol, rel_tol,
                                max_terms, True)
    if st == OK:
        noise = mx * _EPS * math.sqrt(n + 1.0)
        if noise <= guard * (abs_tol + rel_tol * abs(val)):
            return val, OK
        st = CANCELLED
    if 0.0 < alpha < 1.0:
        val, _ = gml_talbot(alpha, beta, gam, x, nodes)
        return val, USED_INVERSION
    return val, st


# ---------------------------------------------------------------------------
# Wright series  sum_k x^k / (k! Gamma(alpha k + beta)),  alpha > -1

@njit(cache=True)
def wright_series(alpha, beta, x, abs_tol, rel_tol, max_terms, compensated):
    """Returns (value, max_abs_term, n_terms, status)."""
    s = 0.0
    comp = 0.0
    mx = 0.0
    logx = math.log(abs(x)) if x != 0.0 else -_LOG_HUGE
    small = 0
    for k in range(max_terms):
        lrg, srg = _log_rgamma(alpha * k + beta)
        if k == 0:
            lt = lrg
            st = srg
        else:
            lt = k * logx - math.lgamma(k + 1.0) + lrg
            st = srg if (x > 0.0 or k % 2 == 0) else -srg
        if lt > _LOG_HUGE:
            return s, mx, k, OVERFLOW
        term = st * math.exp(lt)
        a = abs(term)
        if a > mx:
            mx = a
        if compensated:
            y = term - comp
            t = s + y
            comp = (t - s) - y
            s = t
        else:
            s += term
        if a <= abs_tol + rel_tol * abs(s):
            small += 1
            if small >= 3 and k >= 2:
                return s, mx, k + 1, OK
        else:
            small = 0
    return s, mx, max_terms, NO_CONVERGENCE


# ---------------------------------------------------------------------------
# Kummer 1F1 series by direct term recurrence (no gamma calls)

@njit(cache=True)
def kummer_series(a, c, z, abs_tol, rel_tol, max_terms, compensated):
    """Returns (value, max_abs_term, n_terms, status)."""
    term = 1.0
    s = 0.0
    comp = 0.0
    mx = 1.0
    small = 0
    for j in range(max_terms):
        if compensated:
            y = term - comp
            t = s + y
            comp = (t - s) - y
            s = t
        else:
            s += term
        at = abs(term)
        if at > mx:
            mx = at
        if at <= abs_tol + rel_tol * abs(s):
            small += 1
            if small >= 2 and j >= 2:
                return s, mx, j + 1, OK
        else:
            small = 0
        term = term * (a + j) * z / ((c + j) * (j + 1.0))
        if abs(term) > 1e300:
            return s, mx, j, OVERFLOW
    return s, mx, max_terms, NO_CONVERGENCE


# ---------------------------------------------------------------------------
# one-sided stable density, unit scale (Laplace transform exp(-s^alpha))

@njit(cache=True)
def _stable_series(x, alpha, rel_tol, max_terms):
    """Convergent large-argument series; returns (value, max_term, status)."""
    s = 0.0
    comp = 0.0
    mx = 0.0
    logx = math.log(x)
    small = 0
    for k in range(1, max_terms + 1):
        lt = math.lgamma(k * alpha + 1.0) - math.lgamma(k + 1.0) - (k * alpha + 1.0) * logx
        if lt > _LOG_HUGE:
            return s, mx, NO_CONVERGENCE
        mag = math.exp(lt)
        sign = 1.0 if k % 2 == 1 else -1.0
        term = sign * mag * math.sin(math.pi * k * alpha)
        if mag > mx:
            mx = mag
        y = term - comp
        t = s + y
        comp = (t - s) - y
        s = t
        if mag <= rel_tol * abs(s):
            small += 1
            if small >= 2:
                return s / math.pi, mx, OK
        else:
            small = 0
    return s / math.pi, mx, NO_CONVERGENCE


@njit(cache=True)
def _stable_saddle(x, alpha):
    """Left-tail saddle-point form; exact for alpha = 1/2."""
    oma = 1.0 - alpha
    eta = (alpha / x) ** (1.0 / oma)
    expo = oma * alpha ** (alpha / oma) * x ** (-alpha / oma)
    if expo > 740.0:
        return 0.0
    amp = math.sqrt(2.0 * math.pi * alpha * oma * eta ** (alpha - 2.0))
    return math.exp(-expo) / amp


@njit(cache=True)
def _zolo_integrand(phi, alpha, xpow):
    """A(phi) * exp(-xpow * A(phi)) with the angular factor in log space."""
    oma = 1.0 - alpha
    la = (alpha * math.log(math.sin(alpha * phi))
          + oma * math.log(math.sin(oma * phi))
          - math.log(math.sin(phi))) / oma
    if la > 690.0:
        return 0.0
    a = math.exp(la)
    e = xpow * a
    if e > 705.0:
        return 0.0
    return a * math.exp(-e)


@njit(cache=True)
def _stable_angular(x, alpha, rel_tol):
    """Exact angular-integral representation of the unit-scale density.

    The integrand is positive and smooth (no cancellation), so composite
    Simpson with interval doubling converges for every (x, alpha); used in
    the mid range where neither the series nor the tail form applies.
    """
    oma = 1.0 - alpha
    xpow = x ** (-alpha / oma)
    pref = alpha * x ** (-1.0 / oma) / (math.pi * oma)
    a0 = oma * alpha ** (alpha / oma)
    e0 = xpow * a0
    f_left = a0 * math.exp(-e0) if e0 <= 705.0 else 0.0

    prev = -1.0
    val = 0.0
    n = 128
    while n <= 16384:
        h = math.pi / n
        acc = f_left  # phi = 0 endpoint; integrand vanishes at phi = pi
        for i in range(1, n):
            w = 4.0 if i % 2 == 1 else 2.0
            acc += w * _zolo_integrand(i * h, alpha, xpow)
        val = acc * h / 3.0
        if prev >= 0.0 and abs(val - prev) <= 0.1 * rel_tol * abs(val) + 1e-300:
            break
        prev = val
        n *= 2
    return pref * val


@njit(cache=True)
def stable_std(x, alpha, rel_tol, max_terms, xmin, saddle_expo, nodes):
    """Unit-scale one-sided stable density at x > 0.

    Series for x >= xmin, the angular integral in the mid range, and the
    saddle form once the left-tail exponent passes saddle_expo (value below
    ~1e-200 there).  Returns (value, status).
    """
    if x <= 0.0:
        return 0.0, OK
    if x >= xmin:
        val, mx, st = _stable_series(x, alpha, rel_tol, max_terms)
        if st == OK and mx * _EPS <= rel_tol * abs(val) + 1e-305:
            return val, OK
    expo = (1.0 - alpha) * alpha ** (alpha / (1.0 - alpha)) * x ** (-alpha / (1.0 - alpha))
    if expo > saddle_expo:
        return _stable_saddle(x, alpha), USED_SADDLE
    return _stable_angular(x, alpha, rel_tol), USED_INVERSION


@njit(cache=True)
def _stable_std_many_nb(xs, alpha, rel_tol, max_terms, xmin, saddle_expo, nodes):
    out = np.empty(xs.shape[0])
    for i in range(xs.shape[0]):
        out[i], _ = stable_std(xs[i], alpha, rel_tol, max_terms, xmin,
                               saddle_expo, nodes)
    return out


def _stable_std_many_np(xs, alpha, rel_tol, max_terms, xmin, saddle_expo, nodes):
    """Vectorized numpy twin of the jitted loop."""
    xs = np.asarray(xs, dtype=float)
    out = np.zeros_like(xs)
    pos = xs > 0.0
    if not pos.any():
        return out
    x = xs[pos]
    val = np.full(x.shape, np.nan)

    # series on the right
    ser = x >= xmin
    if ser.any():
        xv = x[ser]
        s = np.zeros_like(xv)
        comp = np.zeros_like(xv)
        mx = np.zeros_like(xv)
        logx = np.log(xv)
        small = np.zeros(xv.shape, dtype=np.int64)
        done = np.zeros(xv.shape, dtype=bool)
        for k in range(1, max_terms + 1):
            lt = math.lgamma(k * alpha + 1.0) - math.lgamma(k + 1.0) - (k * alpha + 1.0) * logx
            mag = np.where(done, 0.0, np.exp(lt))
            term = ((1.0 if k % 2 == 1 else -1.0) * math.sin(math.pi * k * alpha)) * mag
            np.maximum(mx, mag, out=mx)
            y = term - comp
            t = s + y
            comp = (t - s) - y
            s = t
            conv = mag <= rel_tol * np.abs(s)
            small = np.where(conv, small + 1, 0)
            done |= small >= 2
            if done.all():
                break
        ok = done & (mx * _EPS <= rel_tol * np.abs(s) + 1e-305)
        val[ser] = np.where(ok, s / math.pi, np.nan)

    # remaining points: saddle in the deep tail, Talbot in the gap
    todo = np.isnan(val)
    if todo.any():
        xv = x[todo]
        oma = 1.0 - alpha
        expo = oma * alpha ** (alpha / oma) * xv ** (-alpha / oma)
        res = np.empty_like(xv)
        deep = expo > saddle_expo
        if deep.any():
            xd = xv[deep]
            eta = (alpha / xd) ** (1.0 / oma)
            ex = oma * alpha ** (alpha / oma) * xd ** (-alpha / oma)
            amp = np.sqrt(2.0 * math.pi * alpha * oma * eta ** (alpha - 2.0))
            res[deep] = np.where(ex > 740.0, 0.0, np.exp(-np.minimum(ex, 745.0)) / amp)
        mid = ~deep
        if mid.any():
            xm = xv[mid]
            xpow = xm ** (-alpha / oma)          # (P,)
            pref = alpha * xm ** (-1.0 / oma) / (math.pi * oma)
            n = 4096
            phi = np.linspace(0.0, math.pi, n + 1)[1:-1]
            with np.errstate(over="ignore", divide="ignore"):
                la = (alpha * np.log(np.sin(alpha * phi))
                      + oma * np.log(np.sin(oma * phi))
                      - np.log(np.sin(phi))) / oma
                a = np.exp(np.minimum(la, 690.0))
                ee = xpow[:, None] * a[None, :]
                g = np.where(ee > 705.0, 0.0, a[None, :] * np.exp(-np.minimum(ee, 705.0)))
            a0 = oma * alpha ** (alpha / oma)
            g0 = np.where(xpow * a0 > 705.0, 0.0, a0 * np.exp(-np.minimum(xpow * a0, 705.0)))
            w = np.where(np.arange(1, n) % 2 == 1, 4.0, 2.0)
            simp = (g0 + g @ w) * (math.pi / n) / 3.0
            res[mid] = pref * simp
        val[todo] = res

    out[pos] = val
    return out


# ---------------------------------------------------------------------------
# survival/pgf/Fourier core: Phi(z, t) = E exp(-z * T(t))  (two GML sums)

@njit(cache=True)
def _outer_rmin(absq, delta, rmax):
    """Earliest index at which the outer sums |q|^r / Gamma(delta r + .)
    may legitimately look converged: past the peak of that envelope.
    Stopping earlier risks mistaking a mid-sum dip for convergence.
    """
    if absq <= 1.0:
        return 2
    peak = absq ** (1.0 / delta) / delta
    if peak >= rmax:
        return rmax
    return int(peak) + 3


@njit(cache=True)
def _phi_talbot(nu1, nu2, n1, n2, z, t, nodes):
    M = nodes
    r = 2.0 * M / (5.0 * t)
    acc = 0.0
    for k in range(M):
        if k == 0:
            s = complex(r, 0.0)
            w = 0.5 * cmath.exp(s * t)
        else:
            theta = math.pi * k / M
            cot = 1.0 / math.tan(theta)
            s = r * theta * complex(cot, 1.0)
            w = cmath.exp(s * t) * complex(1.0, theta * (1.0 + cot * cot) - cot)
        F = (n1 * s ** (nu1 - 1.0) + n2 * s ** (nu2 - 1.0)) / (
            z + n1 * s ** nu1 + n2 * s ** nu2)
        acc += (w * F).real
    return 2.0 / (5.0 * t) * acc


@njit(cache=True)
def phi_series(nu1, nu2, n1, n2, z, t, abs_tol, rel_tol, max_terms, nodes, guard):
    """Exponential functional of the random time as the double GML series.

    No transform fallback at the outer level (the route must stay
    distinguishable for route-agreement checks); the inner GML evaluations
    may still use their own inversion.  Returns (value, status).
    """
    if t <= 0.0 or z == 0.0:
        return 1.0, OK
    delta = nu2 - nu1
    q = -(n1 / n2) * t ** delta
    w = z * t ** nu2 / n2
    rmax = min(max_terms, 200)
    rmin = _outer_rmin(abs(q), delta, rmax)
    if rmin >= rmax:
        return 0.0, CANCELLED
    s = 0.0
    comp = 0.0
    mx = 0.0
    qr = 1.0
    small = 0
    for r in range(rmax):
        e1, st1 = gml_neg_auto(nu2, delta * r + 1.0, r + 1.0, w,
                               abs_tol, rel_tol, max_terms, nodes, guard)
        e2, st2 = gml_neg_auto(nu2, delta * (r + 1.0) + 1.0, r + 1.0, w,
                               abs_tol, rel_tol, max_terms, nodes, guard)
        if st1 > USED_INVERSION or st2 > USED_INVERSION:
            return s, max(st1, st2)
        term = qr * (e1 - q * e2)
        a = abs(term)
        if a > mx:
            mx = a
        y = term - comp
        tt = s + y
        comp = (tt - s) - y
        s = tt
        tol = abs_tol + rel_tol * abs(s)
        floor = abs(qr) * _INNER_FLOOR
        if a <= tol and floor <= tol:
            small += 1
            if small >= 3 and r >= rmin:
                if mx * _EPS * math.sqrt(r + 1.0) <= guard * tol:
                    return s, OK
                return s, CANCELLED
        elif floor > tol and a <= 4.0 * floor and r >= 1:
            # terms have entered the amplified-noise belt before converging
            return s, CANCELLED
        else:
            small = 0
        qr *= q
        if abs(qr) > 1e280:
            return s, CANCELLED
    return s, NO_CONVERGENCE


@njit(cache=True)
def phi_core(nu1, nu2, n1, n2, z, t, abs_tol, rel_tol, max_terms, nodes, guard):
    """Series-first evaluation of the exponential functional with guarded
    fallback to inversion of its closed-form transform.

    Returns (value, status); status is OK or USED_INVERSION.
    """
    val, st = phi_series(nu1, nu2, n1, n2, z, t, abs_tol, rel_tol, max_terms,
                         nodes, guard)
    if st == OK:
        return val, OK
    return _phi_talbot(nu1, nu2, n1, n2, z, t, nodes), USED_INVERSION


@njit(cache=True)
def _phi_grid_nb(nu1, nu2, n1, n2, z, ts, abs_tol, rel_tol, max_terms, nodes, guard):
    out = np.empty(ts.shape[0])
    for i in range(ts.shape[0]):
        out[i], _ = phi_core(nu1, nu2, n1, n2, z, ts[i],
                             abs_tol, rel_tol, max_terms, nodes, guard)
    return out


def _gml_series_vec(alpha, beta, gam, z, abs_tol, rel_tol, max_terms):
    """Vector-in-z GML series via term-ratio recurrence (needs beta > 0).

    Returns (values, max_abs_term, converged_mask).
    """
    z = np.asarray(z, dtype=float)
    term = np.full(z.shape, 1.0 / math.gamma(beta))
    s = np.zeros_like(z)
    comp = np.zeros_like(z)
    mx = np.abs(term).copy()
    small = np.zeros(z.shape, dtype=np.int64)
    done = np.zeros(z.shape, dtype=bool)
    for j in range(max_terms):
        y = np.where(done, 0.0, term) - comp
        t = s + y
        comp = (t - s) - y
        s = t
        a = np.abs(term)
        np.maximum(mx, a, out=mx)
        conv = a <= abs_tol + rel_tol * np.abs(s)
        small = np.where(conv, small + 1, 0)
        done |= (small >= 2) & (j >= 2)
        if done.all():
            return s, mx, done
        ratio = math.exp(math.lgamma(alpha * j + beta) -
                         math.lgamma(alpha * j + alpha + beta))
        term = term * z * ((gam + j) / (j + 1.0) * ratio)
    return s, mx, done


def _phi_grid_np(nu1, nu2, n1, n2, z, ts, abs_tol, rel_tol, max_terms, nodes, guard):
    """Vectorized numpy twin of the jitted grid loop."""
    ts = np.asarray(ts, dtype=float)
    out = np.ones_like(ts)
    if z == 0.0:
        return out
    act = ts > 0.0
    if not act.any():
        return out
    t = ts[act]
    delta = nu2 - nu1
    q = -(n1 / n2) * t ** delta
    w = -(z / n2) * t ** nu2
    rmax = min(max_terms, 200)
    absq = np.abs(q)
    rmin = np.where(absq <= 1.0, 2.0,
                    np.minimum(absq ** (1.0 / delta) / delta + 3.0, rmax))
    s = np.zeros_like(t)
    comp = np.zeros_like(t)
    mx = np.zeros_like(t)
    qr = np.ones_like(t)
    small = np.zeros(t.shape, dtype=np.int64)
    done = np.zeros(t.shape, dtype=bool)
    feasible = rmin < rmax
    for r in range(rmax):
        e1, m1, c1 = _gml_series_vec(nu2, delta * r + 1.0, r + 1.0, w,
                                     abs_tol, rel_tol, max_terms)
        e2, m2, c2 = _gml_series_vec(nu2, delta * (r + 1.0) + 1.0, r + 1.0, w,
                                     abs_tol, rel_tol, max_terms)
        feasible &= c1 & c2
        term = np.where(done, 0.0, qr * (e1 - q * e2))
        a = np.abs(term)
        np.maximum(mx, np.abs(qr) * np.maximum(m1, np.abs(q) * m2), out=mx)
        y = term - comp
        tt = s + y
        comp = (tt - s) - y
        s = tt
        tolv = abs_tol + rel_tol * np.abs(s)
        floorv = np.abs(qr) * _INNER_FLOOR
        conv = (a <= tolv) & (floorv <= tolv)
        small = np.where(conv, small + 1, 0)
        done |= (small >= 3) & (r >= rmin)
        feasible &= ~((floorv > tolv) & (a <= 4.0 * floorv) & (r >= 1) & ~done)
        if (done | ~feasible).all():
            break
        qr = qr * q
    noise_ok = mx * _EPS * math.sqrt(rmax) <= guard * (abs_tol + rel_tol * np.abs(s))
    good = done & feasible & noise_ok
    vals = np.where(good, s, np.nan)
    bad = np.isnan(vals)
    if bad.any():
        M = nodes
        theta = np.arange(M) * math.pi / M
        cot = np.empty(M)
        cot[0] = 0.0
        cot[1:] = 1.0 / np.tan(theta[1:])
        base = np.empty(M, dtype=np.complex128)
        base[0] = 1.0
        base[1:] = theta[1:] * (cot[1:] + 1j)
        wmul = np.empty(M, dtype=np.complex128)
        wmul[0] = 0.5
        wmul[1:] = 1.0 + 1j * (theta[1:] * (1.0 + cot[1:] ** 2) - cot[1:])
        tb = t[bad]
        rr = 2.0 * M / (5.0 * tb)
        snode = rr[:, None] * base[None, :]
        F = (n1 * snode ** (nu1 - 1.0) + n2 * snode ** (nu2 - 1.0)) / (
            z + n1 * snode ** nu1 + n2 * snode ** nu2)
        inv = 2.0 / (5.0 * tb) * (np.exp(snode * tb[:, None]) * wmul[None, :] * F).real.sum(axis=1)
        vals[bad] = inv
    out[act] = vals
    return out


# ---------------------------------------------------------------------------
# interarrival density core (series + transform fallback)

@njit(cache=True)
def _interarrival_talbot(nu1, nu2, n1, n2, lam, t, nodes):
    M = nodes
    r = 2.0 * M / (5.0 * t)
    acc = 0.0
    for k in range(M):
        if k == 0:
            s = complex(r, 0.0)
            w = 0.5 * cmath.exp(s * t)
        else:
            theta = math.pi * k / M
            cot = 1.0 / math.tan(theta)
            s = r * theta * complex(cot, 1.0)
            w = cmath.exp(s * t) * complex(1.0, theta * (1.0 + cot * cot) - cot)
        F = lam / (lam + n1 * s ** nu1 + n2 * s ** nu2)
        acc += (w * F).real
    return 2.0 / (5.0 * t) * acc


@njit(cache=True)
def interarrival_core(nu1, nu2, n1, n2, lam, t, abs_tol, rel_tol, max_terms,
                      nodes, guard):
    """First-interarrival density; returns (value, status)."""
    delta = nu2 - nu1
    q = -(n1 / n2) * t ** delta
    w = lam * t ** nu2 / n2
    pref = (lam / n2) * t ** (nu2 - 1.0)
    rmax = min(max_terms, 200)
    rmin = _outer_rmin(abs(q), delta, rmax)
    if rmin < rmax:
        s = 0.0
        comp = 0.0
        mx = 0.0
        qr = 1.0
        small = 0
        for r in range(rmax):
            e, st = gml_neg_auto(nu2, nu2 + delta * r, r + 1.0, w,
                                 abs_tol, rel_tol, max_terms, nodes, guard)
            if st > USED_INVERSION:
                break
            term = qr * e
            a = abs(term)
            if a > mx:
                mx = a
            y = term - comp
            tt = s + y
            comp = (tt - s) - y
            s = tt
            tol = abs_tol + rel_tol * abs(s)
            floor = abs(qr) * _INNER_FLOOR
            if a <= tol and floor <= tol:
                small += 1
                if small >= 3 and r >= rmin:
                    if mx * _EPS * math.sqrt(r + 1.0) <= guard * tol:
                        return pref * s, OK
                    break
            elif floor > tol and a <= 4.0 * floor and r >= 1:
                break
            else:
                small = 0
            qr *= q
            if abs(qr) > 1e280:
                break
    return _interarrival_talbot(nu1, nu2, n1, n2, lam, t, nodes), USED_INVERSION


# ---------------------------------------------------------------------------
# random-time density: double Wright series and guarded transform inversion

@njit(cache=True)
def qseries_core(nu1, nu2, n1, n2, lam, y, t, abs_tol, rel_tol, max_terms):
    """Double Wright series for the random-time density (series route only).

    Returns (value, status); caller handles fallback on CANCELLED /
    NO_CONVERGENCE.
    """
    a1 = n1 * y / (lam * t ** nu1)
    a2 = n2 * y / (lam * t ** nu2)
    total = 0.0
    mx = 0.0
    for part in range(2):
        if part == 0:
            pref = n1 / (lam * t ** nu1)
            nu_in, nu_out, ain, aout = nu1, nu2, a1, a2
        else:
            pref = n2 / (lam * t ** nu2)
            nu_in, nu_out, ain, aout = nu2, nu1, a2, a1
        if pref == 0.0:
            continue
        s = 0.0
        comp = 0.0
        fr = 1.0  # (-aout)^r / r!
        small = 0
        rmin = int(aout) + 3  # the envelope a^r/r! peaks near r = a
        converged = False
        for r in range(max_terms):
            wv, wmx, _, wst = wright_series(-nu_in, 1.0 - nu_out * r - nu_in,
                                            -ain, abs_tol, rel_tol, max_terms, True)
            if wst != OK:
                return total, wst
            term = fr * wv
            a = abs(term)
            if a > mx:
                mx = a
            if abs(fr) * wmx > mx:
                mx = abs(fr) * wmx
            yv = term - comp
            tt = s + yv
            comp = (tt - s) - yv
            s = tt
            tol = abs_tol + rel_tol * abs(s)
            floor = abs(fr) * _INNER_FLOOR
            if a <= tol and floor <= tol:
                small += 1
                if small >= 3 and r >= rmin:
                    converged = True
                    break
            elif floor > tol and a <= 4.0 * floor and r >= 1:
                return total, CANCELLED
            else:
                small = 0
            fr *= -aout / (r + 1.0)
        if not converged:
            return total, NO_CONVERGENCE
        total += pref * s
    if mx * _EPS * 4.0 > abs_tol + rel_tol * abs(total) or total < -abs_tol:
        return total, CANCELLED
    return max(total, 0.0), OK


@njit(cache=True)
def q_talbot(nu1, nu2, n1, n2, lam, y, t, nodes):
    """Inversion of the closed-form random-time transform.

    Returns (value, roundoff_estimate); the estimate blows up in the far
    tail where the complex exponential spikes on the contour.
    """
    M = nodes
    r = 2.0 * M / (5.0 * t)
    acc = 0.0
    mx = 0.0
    for k in range(M):
        if k == 0:
            s = complex(r, 0.0)
            w = 0.5 * cmath.exp(s * t)
        else:
            theta = math.pi * k / M
            cot = 1.0 / math.tan(theta)
            s = r * theta * complex(cot, 1.0)
            w = cmath.exp(s * t) * complex(1.0, theta * (1.0 + cot * cot) - cot)
        a = n1 * s ** nu1 + n2 * s ** nu2
        ex = -a * y / lam
        if ex.real > _LOG_HUGE:
            return 0.0, 1e300
        F = (n1 * s ** (nu1 - 1.0) + n2 * s ** (nu2 - 1.0)) / lam * cmath.exp(ex)
        contrib = (w * F).real
        if abs(contrib) > mx:
            mx = abs(contrib)
        acc += contrib
    pref = 2.0 / (5.0 * t)
    return pref * acc, pref * mx * _EPS * M


# ---------------------------------------------------------------------------
# count-distribution transform inversions

@njit(cache=True)
def pmf_talbot(nu1, nu2, n1, n2, lam, k, t, nodes):
    """Invert the count-probability transform at integer k; returns value."""
    M = nodes
    r = 2.0 * M / (5.0 * t)
    acc = 0.0
    for i in range(M):
        if i == 0:
            s = complex(r, 0.0)
            w = 0.5 * cmath.exp(s * t)
        else:
            theta = math.pi * i / M
            cot = 1.0 / math.tan(theta)
            s = r * theta * complex(cot, 1.0)
            w = cmath.exp(s * t) * complex(1.0, theta * (1.0 + cot * cot) - cot)
        den = lam + n1 * s ** nu1 + n2 * s ** nu2
        F = (lam / den) ** k * (n1 * s ** (nu1 - 1.0) + n2 * s ** (nu2 - 1.0)) / den
        acc += (w * F).real
    return 2.0 / (5.0 * t) * acc


@njit(cache=True)
def waiting_talbot(nu1, nu2, n1, n2, lam, k, t, nodes):
    """Invert the k-th event waiting-time transform; returns density value."""
    M = nodes
    r = 2.0 * M / (5.0 * t)
    acc = 0.0
    for i in range(M):
        if i == 0:
            s = complex(r, 0.0)
            w = 0.5 * cmath.exp(s * t)
        else:
            theta = math.pi * i / M
            cot = 1.0 / math.tan(theta)
            s = r * theta * complex(cot, 1.0)
            w = cmath.exp(s * t) * complex(1.0, theta * (1.0 + cot * cot) - cot)
        F = (lam / (lam + n1 * s ** nu1 + n2 * s ** nu2)) ** k
        acc += (w * F).real
    return 2.0 / (5.0 * t) * acc


# ---------------------------------------------------------------------------
# one-sided stable sampling transform (Kanter form), vectorized

def kanter_std(alpha: float, u: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Map U(0, pi) x Exp(1) draws to unit-scale one-sided stable samples.

    Log-space evaluation keeps the angular factor finite near the endpoints.
    """
    oma = 1.0 - alpha
    log_a = (alpha * np.log(np.sin(alpha * u))
             + oma * np.log(np.sin(oma * u))
             - np.log(np.sin(u))) / oma
    return np.exp((oma / alpha) * (log_a - np.log(w)))


# ---------------------------------------------------------------------------
# dispatch

if NUMBA_ENABLED:
    stable_std_many = _stable_std_many_nb
    phi_grid = _phi_grid_nb
else:
    stable_std_many = _stable_std_many_np
    phi_grid = _phi_grid_np
