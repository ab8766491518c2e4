"""Extended-precision reference implementations used only by the tests.

Plain partial sums at high dps (never mpmath's adaptive nsum, which
misjudges alternating series riddled with exact zeros).
"""

from __future__ import annotations

import mpmath as mp


def mp_gml(alpha, beta, gamma, z, terms=2000, dps=50) -> float:
    """Brute-force three-parameter Mittag-Leffler series."""
    with mp.workdps(dps):
        a, b, g, zz = (mp.mpf(str(v)) for v in (alpha, beta, gamma, z))
        s = mp.mpf(0)
        poch = mp.mpf(1)
        for j in range(terms):
            s += poch * zz ** j * mp.rgamma(a * j + b) / mp.factorial(j)
            poch *= g + j
        return float(s)


def mp_ml(alpha, beta, z, terms=2000, dps=50) -> float:
    return mp_gml(alpha, beta, 1.0, z, terms=terms, dps=dps)


def mp_wright(alpha, beta, x, terms=600, dps=60) -> float:
    """Brute-force Wright series (rgamma zeroes out the pole terms)."""
    with mp.workdps(dps):
        a, b, xx = (mp.mpf(str(v)) for v in (alpha, beta, x))
        s = mp.mpf(0)
        for k in range(terms):
            s += xx ** k * mp.rgamma(a * k + b) / mp.factorial(k)
        return float(s)


def mp_kummer(a, c, z, dps=50) -> float:
    with mp.workdps(dps):
        return float(mp.hyp1f1(mp.mpf(str(a)), mp.mpf(str(c)), mp.mpf(str(z))))


def mp_invert(transform, t, dps=40, degree=60) -> float:
    """High-precision fixed-Talbot inversion (mpmath's own implementation),
    independent of the package's float64 contour code.
    """
    with mp.workdps(dps):
        return float(mp.invertlaplace(transform, t, method="talbot",
                                      degree=degree))


def mp_stable_std(x, alpha, dps=40, degree=80) -> float:
    """Unit-scale one-sided stable density via mpmath inversion."""
    a = mp.mpf(str(alpha))
    return mp_invert(lambda s: mp.e ** (-(s ** a)), x, dps=dps, degree=degree)
