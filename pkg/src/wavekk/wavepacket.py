"""Closed-form free and barrier-reflected Gaussian wave packets.

The free packet is evaluated as a complex logarithm and exponentiated only at
the end, so parameter sets whose Gaussian exponents reach 1e20 and beyond
(macroscopic projectiles) neither overflow nor lose the relative factor
between the incoming and the mirrored term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate

from .core import ConvergenceError, InputError, PacketParams, SingularTimeError

# |t - i t_d| must exceed this fraction of t_d for complex-time evaluation.
BRANCH_GUARD = 1e-9


def _check_branch(params: PacketParams, t) -> None:
    t = np.asarray(t)
    if np.iscomplexobj(t):
        t_d = params.t_d
        if np.any(np.abs(t - 1j * t_d) <= BRANCH_GUARD * t_d):
            raise SingularTimeError(f"time too close to the branch point t = {t_d}j")


def log_free_psi(params: PacketParams, x, t):
    """Natural log of the free packet psi(x, a, t); broadcasts over x and t.

    Complex t is allowed (analytic continuation); the square-root branch is
    the principal one, whose cut runs up the imaginary axis above i*t_d.
    """
    _check_branch(params, t)
    m, a, K, d = params.m, params.a, params.K, params.delta
    x = np.asarray(x, dtype=float)
    t = np.asarray(t)
    xi = x - a
    s = 4.0 * d**2 + 2j * t / m
    expo = -(xi**2 - 4j * d**2 * K * (xi - K * t / (2.0 * m))) / s
    return expo - 0.5 * np.log(d + 1j * t / (2.0 * m * d))


def free_psi(params: PacketParams, x, t):
    """Free packet value (first closed form); see :func:`log_free_psi`."""
    return np.exp(log_free_psi(params, x, t))


def free_psi_polar(params: PacketParams, x, t):
    """Modulus and phase of the free packet at real t (second closed form).

    Returns:
        (modulus, phase) arrays.
    """
    m, a, K, d = params.m, params.a, params.K, params.delta
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    xi = x - a
    modulus = (1.0 / (d**2 + t**2 / (4 * d**2 * m**2))) ** 0.25 * np.exp(
        -((xi - K * t / m) ** 2) / (4 * d**2 + t**2 / (d**2 * m**2))
    )
    phase = -0.5 * np.arctan(t / (2 * d**2 * m)) + (
        K * (xi - K * t / (2 * m)) + xi**2 / (8 * d**2) * t / (m * d**2)
    ) / (1 + t**2 / (4 * d**4 * m**2))
    return modulus, phase


def spread(params: PacketParams, t) -> np.ndarray:
    """Standard deviation of |psi|^2 at real time t."""
    d = params.delta
    return np.sqrt(d**2 + np.asarray(t, dtype=float) ** 2 / (4 * d**2 * params.m**2))


def log_reflected_psi_unnormalized(params: PacketParams, x, t):
    """log[psi(x) - psi(-x)] for x < 0, computed as log psi(x) + log(1 - ratio)."""
    from .diff_fn import log1m_exp

    lp = log_free_psi(params, x, t)
    lm = log_free_psi(params, -np.asarray(x, dtype=float), t)
    return lp + log1m_exp(lm - lp)


class NormResult(NamedTuple):
    value: float
    abserr: float


def norm_integral(params: PacketParams, t_eval: float = 0.0, epsabs: float = 1e-12,
                  epsrel: float = 1e-12, limit: int = 400) -> NormResult:
    """Adaptive Gauss-Kronrod estimate of the integral of |psi(x)-psi(-x)|^2 over x<0."""
    t_eval = float(t_eval)
    sigma = float(spread(params, t_eval))
    centre = params.a + params.velocity * t_eval
    # leftmost of the incoming (centre) and mirrored (-centre) packet
    left = -abs(centre)
    x_lo = min(params.a, left) - 10.0 * (params.delta + sigma)

    def integrand(x):
        return float(np.exp(2.0 * log_reflected_psi_unnormalized(params, x, t_eval).real))

    points = sorted({p for p in (left, params.a) if x_lo < p < 0.0})
    value, abserr, info = integrate.quad(
        integrand, x_lo, 0.0, epsabs=epsabs, epsrel=epsrel, limit=limit,
        points=points or None, full_output=True,
    )[:3]
    if abserr > max(epsabs, epsrel * abs(value)) * 10:
        raise ConvergenceError(
            f"normalization quadrature did not converge: value={value:g}, error={abserr:g}"
        )
    return NormResult(value, abserr)


def normalization(params: PacketParams, t_eval: float = 0.0, epsabs: float = 1e-12) -> NormResult:
    """Normalizing factor N with a propagated quadrature-error estimate.

    The squared norm vanishes for a packet that is symmetric about the
    barrier (a -> 0 and K -> 0); such degenerate cases raise
    :class:`ConvergenceError` rather than returning a huge N.
    """
    integral, err = norm_integral(params, t_eval, epsabs=epsabs)
    if not integral > 100 * max(err, epsabs):
        raise ConvergenceError(
            f"norm integral {integral:g} not resolved above its error {err:g}; N diverges"
        )
    n = integral**-0.5
    return NormResult(n, 0.5 * n * err / integral)


def norm_integral_closed_form(params: PacketParams) -> float:
    """Exact value of the norm integral for the Gaussian packet (time independent)."""
    a, K, d = params.a, params.K, params.delta
    return np.sqrt(2 * np.pi) * -np.expm1(-(a**2) / (2 * d**2) - 2 * K**2 * d**2)


@dataclass(frozen=True)
class ReflectedState:
    params: PacketParams
    norm: float

    @classmethod
    def from_params(cls, params: PacketParams, t_eval: float = 0.0) -> "ReflectedState":
        return cls(params, normalization(params, t_eval).value)


def log_reflected_psi(state: ReflectedState, x, t):
    """Complex log of the reflected packet; -inf real part on the barrier."""
    x = np.asarray(x, dtype=float)
    if np.any(x > 0):
        raise InputError("reflected packet is defined for x <= 0 only")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.log(state.norm) + log_reflected_psi_unnormalized(state.params, x, t)
    out = np.where(x == 0, -np.inf + 0j, out)
    return out


def reflected_psi(state: ReflectedState, x, t):
    """N [psi(x, a, t) - psi(-x, a, t)] for x <= 0; exactly zero at x = 0."""
    return np.exp(log_reflected_psi(state, x, t))
