"""The difference function chi' = 1 - psi(-x)/psi(x) and its convergent form chi.

With ``z(t) = -4x(2iK delta^2 + a) / (4 delta^2 + 2it/m)`` we have
``chi' = 1 - exp(z)`` and ``chi = chi' / u`` where ``u = -z``, so that
``chi = (1 - exp(-u))/u -> 1`` as ``|t| -> inf``.  In terms of the
characteristic times

    z(t) = 2 i pi n_r (t_r - i t_d) / (t - i t_d).

On the real axis ``Re z`` has the sign of ``t - t_r``, which lets the
logarithm be written with one formula per half-line and no unbounded
exponentials: ``log(1 - e^z)`` for ``t <= t_r`` and
``z + i pi + log(1 - e^-z)`` for ``t > t_r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ConvergenceError, InputError, PacketParams, SingularTimeError, TimeGrid
from .wavepacket import BRANCH_GUARD

# Samples with |chi| below this are flagged and their log-modulus clamped.
ZERO_CLAMP = 1e-13
# Beyond this magnitude a phase cannot be reduced modulo 2 pi in double precision.
PHASE_RESOLVABLE = 1e12
# Adjacent raw-phase gaps within 10% of pi are ambiguous.
UNWRAP_GAP = 0.9 * np.pi


class UnwrapError(ConvergenceError):
    """Grid too coarse to continue the phase from one sample to the next."""


def _log1p(w):
    """Principal log(1 + w) for complex w, accurate for small |w|."""
    w = np.asarray(w, dtype=complex)
    re, im = w.real, w.imag
    with np.errstate(divide="ignore", invalid="ignore"):
        small = np.abs(w) < 0.5
        log_mod = np.where(small, 0.5 * np.log1p(2 * re + re * re + im * im),
                           np.log(np.abs(1 + w)))
    return log_mod + 1j * np.arctan2(im, 1 + re)


def _expm1(w):
    """exp(w) - 1 for complex w without cancellation."""
    w = np.asarray(w, dtype=complex)
    x, y = w.real, w.imag
    re = np.expm1(x) * np.cos(y) - 2 * np.sin(0.5 * y) ** 2
    return re + 1j * np.exp(x) * np.sin(y)


def log1m_exp(z):
    """log(1 - exp(z)) without overflow.

    Uses the principal branch where ``Re z <= 0`` and the form
    ``z + i pi + log(1 - exp(-z))`` elsewhere.  The latter keeps the full
    imaginary part of ``z``; for very large exponents this is the formal
    phase of ``-exp(z)``.
    """
    z = np.asarray(z, dtype=complex)
    left = z.real <= 0
    with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
        zl = np.where(left, z, -1.0)
        zr = np.where(left, -1.0, z)
        ez = np.exp(zl)
        lo = np.where(np.abs(ez) < 0.5, _log1p(-ez), np.log(-_expm1(zl)))
        emz = np.exp(-zr)
        hi = zr + 1j * np.pi + np.where(np.abs(emz) < 0.5, _log1p(-emz), np.log(-_expm1(-zr)))
    return np.where(left, lo, hi)


def _chi_constant(params: PacketParams, x):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x >= 0):
        raise InputError(f"observation point must satisfy x < 0, got {x}")
    w = 2j * params.K * params.delta**2 + params.a
    if w == 0:
        raise InputError("degenerate parameters: 2iK delta^2 + a = 0")
    c = 4.0 * x * w
    return complex(c) if c.ndim == 0 else c


def _check_singular(params: PacketParams, t) -> None:
    t = np.asarray(t)
    if np.iscomplexobj(t) and np.any(np.abs(t - 1j * params.t_d) <= BRANCH_GUARD * params.t_d):
        raise SingularTimeError(f"time too close to the pole t = {params.t_d}j")


def exponent(params: PacketParams, x: float, t):
    """z(t) written with n_r, t_r and t_d; chi' = 1 - exp(z)."""
    _chi_constant(params, x)
    _check_singular(params, t)
    t_r, t_d = params.t_r, params.t_d
    nr = np.abs(np.asarray(x, dtype=float)) * params.K / math.pi
    return 2j * math.pi * nr * (t_r - 1j * t_d) / (np.asarray(t) - 1j * t_d)


def exponent_from_packet(params: PacketParams, x: float, t):
    """The same exponent as the log-ratio of mirrored and direct packets."""
    c = _chi_constant(params, x)
    _check_singular(params, t)
    s = 4.0 * params.delta**2 + 2j * np.asarray(t) / params.m
    return -c / s


def chi_prime(params: PacketParams, x: float, t):
    """Difference function 1 - psi(-x, t)/psi(x, t)."""
    return -_expm1(exponent(params, x, t))


def chi(params: PacketParams, x: float, t):
    """Convergent difference function; tends to 1 for large |t|."""
    u = -exponent(params, x, t)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = -_expm1(-u) / u
    return np.where(u == 0, 1.0 + 0j, out)


def log_chi_prime_pointwise(params: PacketParams, x: float, t):
    """log chi' at arbitrary complex t, branch unspecified beyond exp(.) = chi'."""
    return log1m_exp(exponent(params, x, t))


def _log_u(params: PacketParams, x: float, t):
    # Re s = 4 delta^2 > 0 on the real axis, so Log s is continuous there.
    c = _chi_constant(params, x)
    s = 4.0 * params.delta**2 + 2j * np.asarray(t) / params.m
    return np.log(c) - np.log(s)


def _raw_log_chi(params, x, t):
    return log1m_exp(exponent(params, x, t)) - _log_u(params, x, t)


@dataclass(frozen=True)
class _Branches:
    left: float      # 2 pi multiple added for t <= t_r
    right: float     # 2 pi multiple added for t > t_r
    formal: bool     # right half-line phase not reducible


def _branches(params: PacketParams, x: float) -> _Branches:
    t_r, t_d = params.t_r, params.t_d
    c = abs(_chi_constant(params, x))
    # far enough left that |u| < 1e-6: log chi ~ -u/2 there
    t_far = -(1e6 * c * params.m / 2.0 + 10 * (t_r + t_d))
    far = complex(_raw_log_chi(params, x, t_far))
    left = -2 * math.pi * round(far.imag / (2 * math.pi))
    # at t_r, z is purely imaginary: both formulas are valid; match them
    z_r = complex(exponent(params, x, t_r))
    if abs(z_r.imag) > PHASE_RESOLVABLE:
        return _Branches(left, 0.0, True)
    with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
        ez = np.exp(z_r)
        from_left = complex(np.log(-_expm1(z_r)) if abs(ez) >= 0.5 else _log1p(-ez))
        from_right = complex(z_r + 1j * math.pi + np.log(-_expm1(-z_r)))
    if not np.isfinite(from_left.real):
        # exact real-axis zero at t_r: continue through -pi/2 .. +pi/2 convention
        return _Branches(left, left, False)
    right = left + 2 * math.pi * round((from_left.imag - from_right.imag) / (2 * math.pi))
    return _Branches(left, right, False)


def log_chi(params: PacketParams, x: float, t, which: str = "chi"):
    """Branch-continuous log chi (or log chi') along the real time axis.

    The branch is the one with ``log chi -> 0`` as ``t -> -inf``.  The
    result is a pure function of t, so it can be evaluated on any grid.
    For ``which="chi_prime"`` the log of ``u`` is added back with the
    continuous Log of ``4 delta^2 + 2it/m``.

    Args:
        params: scenario.
        x: observation point, negative.
        t: real times (array-like).
        which: "chi" or "chi_prime".

    Returns:
        complex array; real part log-modulus, imaginary part the continuous
        phase.  Where the phase exceeds what double precision can reduce
        modulo 2 pi (t > t_r with huge exponents) it is the formal phase
        ``Im z + pi``.
    """
    if which not in ("chi", "chi_prime"):
        raise InputError(f"which must be 'chi' or 'chi_prime', got {which!r}")
    t = np.asarray(t, dtype=float)
    br = _branches(params, x)
    out = _raw_log_chi(params, x, t)
    out = out + 1j * np.where(t <= params.t_r, br.left, br.right)
    if which == "chi_prime":
        out = out + _log_u(params, x, t)
    return out


def is_formal(params: PacketParams, x: float, t) -> np.ndarray:
    """Samples whose phase is reported formally (not reducible mod 2 pi)."""
    t = np.asarray(t, dtype=float)
    br = _branches(params, x)
    return np.asarray(br.formal & (t > params.t_r))


@dataclass(frozen=True)
class LogChiPath:
    """Log-domain samples of chi along a real-time grid.

    Attributes:
        grid: the time grid.
        log_mod: log |chi|, clamped at log(1e-13) on flagged samples.
        phase: continuous phase, unwrapped sample to sample.
        raw_phase: principal-branch phase in (-pi, pi].
        flagged: samples within 1e-13 of a zero.
        formal: samples whose phase is the formal (unreduced) value.
    """

    grid: TimeGrid
    log_mod: np.ndarray
    phase: np.ndarray
    raw_phase: np.ndarray
    flagged: np.ndarray
    formal: np.ndarray

    @property
    def times(self) -> np.ndarray:
        return self.grid.times


def _wrap(phi):
    return (np.asarray(phi) + np.pi) % (2 * np.pi) - np.pi


def log_chi_path(params: PacketParams, x: float, grid: TimeGrid, which: str = "chi") -> LogChiPath:
    """Sample log chi on a uniform grid with nearest-branch phase unwrapping.

    The first sample is anchored on the branch of :func:`log_chi`; each
    later sample takes the 2 pi multiple nearest to its predecessor.
    Formal samples (see :func:`log_chi`) bypass unwrapping.

    Raises:
        UnwrapError: if an adjacent raw-phase gap is within 10% of pi
            (gaps touching flagged or formal samples are exempt).
    """
    t = grid.times
    exact = log_chi(params, x, t, which)
    formal = is_formal(params, x, t)
    raw = _wrap(exact.imag)
    raw = np.where(raw <= -np.pi, raw + 2 * np.pi, raw)
    flagged = exact.real < math.log(ZERO_CLAMP)

    gaps = _wrap(np.diff(raw))
    # across an on-axis zero the phase jumps by pi; no branch is nearer
    skip = formal | flagged
    resolvable = ~(skip[1:] | skip[:-1])
    bad = resolvable & (np.abs(gaps) > UNWRAP_GAP)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise UnwrapError(
            f"phase gap {gaps[k]:.3f} rad between t={t[k]:g} and t={t[k + 1]:g}; refine the grid"
        )
    phase = np.empty_like(raw)
    phase[0] = exact.imag[0]
    phase[1:] = phase[0] + np.cumsum(gaps)
    phase = np.where(formal, exact.imag, phase)

    log_mod = np.where(flagged, math.log(ZERO_CLAMP), exact.real)
    return LogChiPath(grid, log_mod, phase, raw, flagged, formal)
