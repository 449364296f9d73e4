"""Zeros of the difference function in the complex time plane.

The n-th zero (n a nonzero integer) sits at

    t_n = t_r n_r / n + i t_d (1 - n_r / n),

and lies in the lower half-plane exactly when 0 < n < n_r.  The winding
number of chi' around a rectangle gives an independent count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .core import ConvergenceError, InputError, PacketParams, n_r
from .diff_fn import chi_prime, exponent, log1m_exp

REAL_AXIS_TOL = 1e-12
RESIDUAL_TOL = 1e-10
POLISH_MAX_MOVE = 1e-6


class PolishDivergenceError(ConvergenceError):
    pass


class WindingResolutionError(ConvergenceError):
    pass


class HalfPlane(str, Enum):
    UPPER = "upper"
    LOWER = "lower"
    REAL_AXIS = "real-axis"


@dataclass(frozen=True)
class ZeroRecord:
    n: int
    t: complex
    half_plane: HalfPlane
    residual: float
    polished: bool = True


def zero_formula(params: PacketParams, x: float, n: int) -> complex:
    if n == 0:
        raise InputError("n = 0 has no finite zero")
    nr = n_r(params, x)
    return complex(params.t_r * nr / n, params.t_d * (1.0 - nr / n))


def classify(params: PacketParams, t: complex) -> HalfPlane:
    if abs(t.imag) < REAL_AXIS_TOL * params.t_d:
        return HalfPlane.REAL_AXIS
    return HalfPlane.LOWER if t.imag < 0 else HalfPlane.UPPER


def _newton(params: PacketParams, x: float, t0: complex, steps: int = 8) -> complex:
    m, d = params.m, params.delta
    c = 4.0 * x * (2j * params.K * d**2 + params.a)
    t = t0
    for _ in range(steps):
        z = complex(exponent(params, x, t))
        f = complex(chi_prime(params, x, t))
        if f == 0:
            break
        s = 4.0 * d**2 + 2j * t / m
        dz = c * (2j / m) / s**2          # d/dt of z = -c/s
        df = -np.exp(z) * dz
        step = f / df
        t = t - step
        if abs(step) <= 4 * np.finfo(float).eps * abs(t):
            break
    return t


def zero_locations(params: PacketParams, x: float, n_lo: int, n_hi: int,
                   polish: bool = True) -> list[ZeroRecord]:
    """Closed-form zeros for n_lo <= n <= n_hi (n = 0 skipped), Newton-polished.

    Raises:
        PolishDivergenceError: Newton moved a root by more than 1e-6
            relative, or the polished residual |chi'| exceeds 1e-10.
    """
    if n_lo > n_hi:
        raise InputError(f"empty index range [{n_lo}, {n_hi}]")
    out = []
    for n in range(n_lo, n_hi + 1):
        if n == 0:
            continue
        t0 = zero_formula(params, x, n)
        if not polish:
            out.append(ZeroRecord(n, t0, classify(params, t0), float("nan"), polished=False))
            continue
        t = _newton(params, x, t0)
        if abs(t - t0) > POLISH_MAX_MOVE * abs(t0):
            raise PolishDivergenceError(f"zero n={n} moved from {t0} to {t} while polishing")
        res = abs(complex(chi_prime(params, x, t)))
        if not res < RESIDUAL_TOL:
            raise PolishDivergenceError(f"zero n={n}: residual |chi'|={res:.3g} after polishing")
        out.append(ZeroRecord(n, t, classify(params, t), res))
    return out


def lower_half_count(params: PacketParams, x: float) -> int:
    """Number of positive n with t''_n < -1e-12 t_d, i.e. n (1 + 1e-12) < n_r."""
    y = n_r(params, x) / (1.0 + REAL_AXIS_TOL)
    return max(math.ceil(y) - 1, 0)


def lower_half_zeros(params: PacketParams, x: float) -> list[ZeroRecord]:
    return [z for z in zero_locations(params, x, 1, max(lower_half_count(params, x), 1))
            if z.half_plane is HalfPlane.LOWER]


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned rectangle in the complex t-plane."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_max > self.re_min and self.im_max > self.im_min):
            raise InputError(f"degenerate rectangle {self}")

    def contains(self, t: complex) -> bool:
        return self.re_min < t.real < self.re_max and self.im_min < t.imag < self.im_max

    def boundary_distance(self, t: complex) -> float:
        """Distance from t to the rectangle's boundary."""
        dx = max(self.re_min - t.real, 0.0, t.real - self.re_max)
        dy = max(self.im_min - t.imag, 0.0, t.imag - self.im_max)
        if dx or dy:
            return math.hypot(dx, dy)
        return min(t.real - self.re_min, self.re_max - t.real, t.imag - self.im_min, self.im_max - t.imag)

    def contour(self, samples_per_edge: int) -> np.ndarray:
        """Counter-clockwise closed contour, first point repeated at the end."""
        s = np.linspace(0.0, 1.0, samples_per_edge, endpoint=False)
        a, b = complex(self.re_min, self.im_min), complex(self.re_max, self.im_min)
        c, d = complex(self.re_max, self.im_max), complex(self.re_min, self.im_max)
        edges = [p + (q - p) * s for p, q in ((a, b), (b, c), (c, d), (d, a))]
        return np.concatenate(edges + [np.array([a])])


def argument_winding(log_f: Callable[[np.ndarray], np.ndarray], rect: Rectangle,
                     samples_per_edge: int, max_step: float = np.pi / 2) -> int:
    """Winding number of f around ``rect`` from samples of log f.

    Sums the principal-branch increments of arg f along the contour.  A
    closed sampled loop always sums to a multiple of 2 pi, so resolution is
    judged by the largest single increment: ``max_step`` or more means
    the contour is undersampled.

    Raises:
        WindingResolutionError: too coarse, or rounding residual >= 0.01.
    """
    if samples_per_edge < 4:
        raise InputError("need at least 4 samples per edge")
    path = rect.contour(samples_per_edge)
    lf = np.asarray(log_f(path), dtype=complex)
    if not np.all(np.isfinite(lf)):
        raise WindingResolutionError("contour passes through a zero or singularity")
    steps = (np.diff(lf.imag) + np.pi) % (2 * np.pi) - np.pi
    if np.max(np.abs(steps)) >= max_step:
        raise WindingResolutionError(
            f"phase step {np.max(np.abs(steps)):.3f} rad on the contour; increase samples_per_edge"
        )
    w = steps.sum() / (2 * np.pi)
    k = round(w)
    if abs(w - k) >= 0.01:
        raise WindingResolutionError(f"winding {w:.4f} is not near an integer")
    return int(k)


def winding_number(params: PacketParams, x: float, rect: Rectangle, samples_per_edge: int = 2000) -> int:
    """Number of chi' zeros inside ``rect`` by the argument principle."""
    t_d = params.t_d
    if rect.boundary_distance(1j * t_d) <= 1e-6 * t_d or rect.contains(1j * t_d):
        raise InputError("rectangle must stay clear of the essential singularity at i t_d")
    return argument_winding(lambda t: log1m_exp(exponent(params, x, t)), rect, samples_per_edge)


def zeros_inside(params: PacketParams, x: float, rect: Rectangle) -> int:
    """Count closed-form zeros inside a rectangle that excludes i t_d.

    Zeros accumulate at i t_d: |t_n - i t_d| = (n_r/|n|) |t_r - i t_d|, so
    only finitely many indices can reach a rectangle at positive distance.
    """
    t_d = params.t_d
    if rect.contains(1j * t_d):
        raise InputError("rectangle contains the accumulation point i t_d")
    rho = rect.boundary_distance(1j * t_d)
    nr = n_r(params, x)
    n_max = int(nr * abs(complex(params.t_r, -t_d)) / rho) + 2
    return sum(rect.contains(zero_formula(params, x, n))
               for n in range(-n_max, n_max + 1) if n != 0)
