"""Independent reference computations for the test suite.

Nothing here imports from wavekk beyond the parameter container; each
oracle re-derives its quantity along a different route (mpmath, closed
forms, scipy quadrature).
"""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np
from scipy import integrate, special

mp.mp.dps = 40


def mp_free_psi(m, a, K, d, x, t):
    """Free packet from the momentum-space integral, at 40 digits.

    With psi(x, 0) = d^(-1/2) exp(-(x-a)^2/(4 d^2) + iK(x-a)) the Fourier
    amplitude is Gaussian in k, and the k-integral evaluates to
    d^(1/2) alpha^(-1/2) exp(beta^2/(4 alpha) - d^2 K^2) with
    alpha = d^2 + it/(2m), beta = 2 d^2 K + i(x - a).
    """
    d = mp.mpf(d)
    alpha = d**2 + 1j * mp.mpc(t) / (2 * m)
    beta = 2 * d**2 * K + 1j * (mp.mpf(x) - a)
    return mp.sqrt(d) / mp.sqrt(alpha) * mp.exp(beta**2 / (4 * alpha) - d**2 * K**2)


def mp_norm_integral(m, a, K, d, t):
    """int_{-inf}^0 |psi(x) - psi(-x)|^2 dx by mpmath quadrature."""
    f = lambda x: abs(mp_free_psi(m, a, K, d, x, t) - mp_free_psi(m, a, K, d, -x, t)) ** 2
    centre = a + K / m * t
    pts = sorted({-mp.inf, mp.mpf(min(a, -abs(centre))) - 20 * d, mp.mpf(-abs(centre)), mp.mpf(0)})
    return float(mp.quad(f, pts))


def closed_form_norm(a, K, d):
    """Gaussian integral of |psi(x) - psi(-x)|^2 for the library's packet."""
    return math.sqrt(2 * math.pi) * (1 - math.exp(-(a**2) / (2 * d**2) - 2 * K**2 * d**2))


def zero_from_packet(m, a, K, d, x, n):
    """Solve -c/s = 2 pi i n for t, with c = 4x(2iK d^2 + a), s = 4 d^2 + 2 i t / m."""
    c = 4 * x * (2j * K * d**2 + a)
    s = -c / (2j * math.pi * n)
    return (s - 4 * d**2) * m / 2j


def gaussian_hilbert(t):
    """(1/pi) PV int exp(-s^2)/(t - s) ds = (2/sqrt(pi)) Dawson(t)."""
    return 2.0 / math.sqrt(math.pi) * special.dawsn(t)


def tail_quad(coef, pole, k, t, t0, t1):
    """Brute-force (1/pi) int over (-inf, t0) and (t1, inf) of coef/(s-p)^k/(t-s)."""
    def part(fn, lo, hi):
        re = integrate.quad(lambda s: fn(s).real, lo, hi, limit=400, epsabs=1e-14, epsrel=1e-12)[0]
        im = integrate.quad(lambda s: fn(s).imag, lo, hi, limit=400, epsabs=1e-14, epsrel=1e-12)[0]
        return re + 1j * im

    f = lambda s: coef / (s - pole) ** k / (t - s)
    return (part(f, -np.inf, t0) + part(f, t1, np.inf)) / math.pi
