"""Principal-value Hilbert transforms and the time-domain reciprocal relations.

For ``f = log chi`` analytic in the lower half t-plane and vanishing at
infinity, with

    H[g](t) = (1/pi) PV int g(t') / (t - t') dt',

the real-axis pair is ``arg chi = -H[log|chi|]`` and
``log|chi| = H[arg chi]``.  Zeros of chi in the lower half-plane are
removed with a Blaschke product B, after which
``arg chi = -H[log|chi|] + arg B``.

The transform of a uniformly sampled window uses singularity subtraction:
the regularized integrand ``(g(t') - g(t))/(t - t')`` is summed with the
trapezoid rule and the removed term is integrated exactly.  Beyond the
window, log chi is replaced by the leading terms of its expansion in
``u = -z`` and those pieces are integrated in closed form.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline

from .core import ConvergenceError, InputError, PacketParams, RegimeError, TimeGrid, analyticity_threshold
from .diff_fn import _chi_constant, log_chi, log_chi_path
from .zeros import lower_half_zeros

EDGE_GUARD = 5
MASK_DENSITY = 0.05
CHUNK_ROWS = 64
# log((1 - e^-u)/u) = sum_k coef[k] u^k
LOG_CHI_SERIES = {1: -1.0 / 2, 2: 1.0 / 24, 4: -1.0 / 2880, 6: 1.0 / 181440}
# tail-model residual allowed at the window ends
END_RESIDUAL = 1e-4
CONVERGENCE_RATIO = 1.5
ERROR_FLOOR = 1e-10


class ThresholdError(RegimeError):
    """Reciprocal relations requested beyond the analyticity threshold."""


class ResolutionError(ConvergenceError):
    """Grid step too coarse for the structure of log chi."""


def _threads() -> int:
    value = os.environ.get("WAVEKK_THREADS")
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            raise InputError(f"WAVEKK_THREADS must be an integer, got {value!r}")
    return os.cpu_count() or 1


@dataclass
class SampledSignal:
    """Real samples on a uniform grid.

    ``mask`` marks valid samples; invalid ones are left out of quadratures
    and linearly interpolated wherever a value is needed.
    """

    t0: float
    dt: float
    values: np.ndarray
    mask: Optional[np.ndarray] = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or self.values.size < 16:
            raise InputError("a sampled signal needs at least 16 samples")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise InputError(f"grid step must be positive, got {self.dt}")
        if self.mask is None:
            self.mask = np.ones(self.values.size, dtype=bool)
        self.mask = np.asarray(self.mask, dtype=bool)
        if self.mask.shape != self.values.shape:
            raise InputError("mask and values differ in shape")
        if not np.all(np.isfinite(self.values[self.mask])):
            raise InputError("valid samples must be finite")

    @classmethod
    def on_grid(cls, grid: TimeGrid, values, mask=None) -> "SampledSignal":
        return cls(grid.t0, grid.dt, values, mask)

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid(self.t0, self.dt, self.n)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n)

    @property
    def t_end(self) -> float:
        return self.t0 + (self.n - 1) * self.dt

    def filled(self) -> np.ndarray:
        """Values with invalid samples linearly interpolated from valid ones."""
        if self.mask.all():
            return self.values
        if not self.mask.any():
            raise InputError("signal has no valid samples")
        t = self.times
        return np.interp(t, t[self.mask], self.values[self.mask])


_STENCIL8 = np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])


def _derivative(f: np.ndarray, dt: float) -> np.ndarray:
    # eighth-order central differences; the diagonal term of the regularized
    # integrand carries weight dt, so this keeps its error at O(dt^9)
    d = np.gradient(f, dt, edge_order=2)
    n = f.size
    if n > 8:
        acc = np.zeros(n - 8)
        for j, c in enumerate(_STENCIL8):
            if c:
                acc = acc + c * f[j:n - 8 + j]
        d[4:-4] = acc / dt
    return d


def _check_mask_density(signal: SampledSignal, idx: np.ndarray) -> None:
    """Reject evaluation points whose neighbourhood is too sparsely valid."""
    bad = np.flatnonzero(~signal.mask)
    if bad.size == 0:
        return
    k = np.arange(signal.n)
    for j in np.unique(idx):
        dist = np.abs(k - j)
        decade = np.floor(np.log10(np.maximum(dist, 1))).astype(int)
        counts = np.bincount(decade)
        masked = np.bincount(decade[bad], minlength=counts.size)
        frac = masked / np.maximum(counts, 1)
        if np.any(frac > MASK_DENSITY):
            raise ConvergenceError(
                f"more than {MASK_DENSITY:.0%} masked samples near t={signal.t0 + j * signal.dt:g}"
            )


def _pv_rows(t, f, w, t_eval, f_eval, fp_eval):
    diff = t_eval[:, None] - t[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        g = (f[None, :] - f_eval[:, None]) / diff
    rows, cols = np.nonzero(diff == 0)
    g[rows, cols] = -fp_eval[rows]
    return (g * w[None, :]).sum(axis=1)


def hilbert_at(signal: SampledSignal, t_eval, tail: Optional[Callable] = None,
               chunk_rows: int = CHUNK_ROWS) -> np.ndarray:
    """(1/pi) PV int signal(t')/(t - t') dt' at each t in ``t_eval``.

    Args:
        signal: samples; invalid ones get zero quadrature weight.
        t_eval: evaluation times inside ``[t0 + 5 dt, t_end - 5 dt]``;
            grid points are used as is, other times through a cubic spline.
        tail: optional callable giving the contribution from outside the
            window at each evaluation time.
        chunk_rows: evaluation rows per work item; results do not depend
            on it.

    Returns:
        array shaped like ``t_eval``.
    """
    t_eval = np.atleast_1d(np.asarray(t_eval, dtype=float))
    lo = signal.t0 + EDGE_GUARD * signal.dt
    hi = signal.t_end - EDGE_GUARD * signal.dt
    tol = 1e-9 * signal.dt
    if np.any(t_eval < lo - tol) or np.any(t_eval > hi + tol):
        raise InputError(f"evaluation times must lie in [{lo:g}, {hi:g}]")

    t = signal.times
    f = signal.filled()
    w = np.full(signal.n, signal.dt)
    w[0] = w[-1] = 0.5 * signal.dt
    w[~signal.mask] = 0.0

    pos = (t_eval - signal.t0) / signal.dt
    near = np.rint(pos)
    on_grid = np.abs(pos - near) < 1e-9
    idx = near.astype(int)
    _check_mask_density(signal, idx)

    f_eval = np.empty_like(t_eval)
    fp_eval = np.empty_like(t_eval)
    if on_grid.any():
        fp = _derivative(f, signal.dt)
        f_eval[on_grid] = f[idx[on_grid]]
        fp_eval[on_grid] = fp[idx[on_grid]]
        t_eval = np.where(on_grid, t[np.clip(idx, 0, signal.n - 1)], t_eval)
    if (~on_grid).any():
        spline = CubicSpline(t, f)
        f_eval[~on_grid] = spline(t_eval[~on_grid])
        fp_eval[~on_grid] = spline(t_eval[~on_grid], 1)

    starts = range(0, t_eval.size, chunk_rows)

    def work(s):
        sl = slice(s, s + chunk_rows)
        return _pv_rows(t, f, w, t_eval[sl], f_eval[sl], fp_eval[sl])

    n_workers = min(_threads(), len(starts))
    if n_workers > 1:
        with ThreadPoolExecutor(n_workers) as pool:
            parts = list(pool.map(work, starts))
    else:
        parts = [work(s) for s in starts]
    body = np.concatenate(parts)
    ends = f_eval * np.log((t_eval - signal.t0) / (signal.t_end - t_eval))
    out = (body + ends) / np.pi
    if tail is not None:
        out = out + np.asarray(tail(t_eval), dtype=float)
    return out


def hilbert_pv(signal: SampledSignal, t_eval: float, tail: Optional[Callable] = None) -> float:
    """Principal-value Hilbert transform of ``signal`` at one time."""
    return float(hilbert_at(signal, [t_eval], tail)[0])


def pole_tail(coef: complex, pole: complex, k: int, t_eval, t0: float, t1: float):
    """(1/pi) times the integral of coef/(t' - pole)^k / (t - t') over t' outside [t0, t1].

    Closed form from the partial-fraction expansion of
    ``1/((t'-p)^k (t-t'))``; requires ``Im pole > 0`` and t0 < t < t1.
    """
    if not pole.imag > 0:
        raise InputError("tail pole must lie in the upper half-plane")
    t = np.asarray(t_eval, dtype=float)
    q = t - pole

    def antideriv(tp):
        total = q ** (-k) * (np.log(tp - pole) - np.log(np.abs(tp - t)))
        for j in range(2, k + 1):
            total = total + q ** (-(k - j + 1)) * (-(tp - pole) ** (1 - j) / (j - 1))
        return total

    integral = antideriv(t0) - antideriv(t1) + 1j * np.pi * q ** (-k)
    return coef * integral / np.pi


def series_tail(params: PacketParams, x: float, t_eval, t0: float, t1: float, order: int = 2):
    """Hilbert contribution of log chi from outside [t0, t1], complex-valued.

    log chi is replaced by ``sum_k c_k u^k`` (k <= order) with
    ``u = B / (t' - i t_d)``; the real part of the result goes with
    log|chi| as input, the imaginary part with arg chi.
    """
    if order not in (0, 1, 2, 4, 6):
        raise InputError(f"tail order must be one of 0, 1, 2, 4, 6; got {order}")
    t = np.asarray(t_eval, dtype=float)
    out = np.zeros(t.shape, dtype=complex)
    if order == 0:
        return out
    c = _chi_constant(params, x)
    b = c * params.m / 2j
    pole = 1j * params.t_d
    for k, a in LOG_CHI_SERIES.items():
        if k <= order:
            out = out + pole_tail(a * b**k, pole, k, t, t0, t1)
    return out


def series_model(params: PacketParams, x: float, t, order: int = 2):
    """The truncated expansion of log chi used for the tails."""
    c = _chi_constant(params, x)
    u = c * params.m / 2j / (np.asarray(t, dtype=float) - 1j * params.t_d)
    out = np.zeros(np.shape(t), dtype=complex)
    for k, a in LOG_CHI_SERIES.items():
        if k <= order:
            out = out + a * u**k
    return out


@dataclass(frozen=True)
class BlaschkeProduct:
    """B(t) = prod (t - t_n)/(t - conj(t_n)) over zeros strictly below the real axis."""

    zeros: tuple = field(default_factory=tuple)

    def __post_init__(self):
        zs = tuple(complex(z) for z in self.zeros)
        for z in zs:
            if not z.imag < 0:
                raise InputError(f"Blaschke zero {z} is not in the lower half-plane")
        object.__setattr__(self, "zeros", zs)

    @classmethod
    def for_scenario(cls, params: PacketParams, x: float) -> "BlaschkeProduct":
        return cls(tuple(z.t for z in lower_half_zeros(params, x)))

    def __len__(self):
        return len(self.zeros)

    def value(self, t):
        t = np.asarray(t)
        out = np.ones(t.shape, dtype=complex)
        for z in self.zeros:
            out = out * (t - z) / (t - np.conj(z))
        return out

    def log_value(self, t):
        """A log of B(t); branch unspecified."""
        t = np.asarray(t)
        out = np.zeros(t.shape, dtype=complex)
        for z in self.zeros:
            out = out + np.log(t - z) - np.log(t - np.conj(z))
        return out

    def arg(self, t):
        """Continuous arg B on the real axis, zero at t -> -inf.

        Each factor sweeps from 0 down to -2 pi as t crosses Re t_n.
        """
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape)
        for z in self.zeros:
            out = out + 2.0 * np.arctan2(-z.imag, t - z.real) - 2.0 * np.pi
        return out


def blaschke_arg(b: BlaschkeProduct, t) -> np.ndarray:
    return b.arg(t)


def _blaschke_tail(b: BlaschkeProduct, t_eval, t0: float, t1: float) -> np.ndarray:
    """(1/pi) int over the tails of beta(t')/(t - t'), beta = arg B normalized at each end."""
    t = np.asarray(t_eval, dtype=float)
    if len(b) == 0:
        return np.zeros(t.shape)
    scale = t1 - t0
    nz = len(b)

    def right(s):
        tp = t1 + scale * (1.0 / s - 1.0)
        beta = b.arg(tp) + 2 * np.pi * nz
        return beta / (t - tp) * scale / s**2

    def left(s):
        tp = t0 - scale * (1.0 / s - 1.0)
        beta = b.arg(tp)
        return beta / (t - tp) * scale / s**2

    r, _ = integrate.quad_vec(right, 0.0, 1.0, epsabs=1e-13, epsrel=1e-11)
    l, _ = integrate.quad_vec(left, 0.0, 1.0, epsabs=1e-13, epsrel=1e-11)
    return (r + l) / np.pi


def _eval_points(grid: TimeGrid, eval_range) -> np.ndarray:
    t = grid.times
    k = np.arange(grid.n)
    ok = (k >= EDGE_GUARD) & (k <= grid.n - 1 - EDGE_GUARD)
    if eval_range is not None:
        lo, hi = eval_range
        ok &= (t >= lo) & (t <= hi)
    if not ok.any():
        raise InputError("no grid samples inside the evaluation range")
    return ok


def _require_analytic(params, x, blaschke, check):
    if check and blaschke is None and not analyticity_threshold(params, x):
        raise ThresholdError(
            "lower-half-plane zeros present (n_r >= 1); supply a BlaschkeProduct"
        )


def check_window(params: PacketParams, x: float, grid: TimeGrid, tail_order: int = 2) -> float:
    """Largest |log chi - tail model| at the two window ends.

    Raises:
        InputError: if it exceeds 1e-4, so the truncation would dominate.
    """
    ends = np.array([grid.t0, grid.t_end])
    diff = log_chi(params, x, ends) - series_model(params, x, ends, tail_order)
    # lower-half zeros leave arg chi at -2 pi N on the right; compare mod 2 pi
    diff = diff.real + 1j * ((diff.imag + np.pi) % (2 * np.pi) - np.pi)
    resid = np.abs(diff)
    worst = float(resid.max())
    if worst > END_RESIDUAL:
        raise InputError(
            f"window too short: log chi differs from its tail model by {worst:.2g} at the ends"
        )
    return worst


def feature_scale(params: PacketParams, x: float) -> float:
    """Smallest distance from the real axis to a zero of chi or to i t_d.

    Zeros exactly on the axis are excluded; they are handled by flagging.
    """
    t_d = params.t_d
    nr = abs(x) * params.K / math.pi
    scale = t_d
    for n in {max(1, math.floor(nr)), max(1, math.ceil(nr))}:
        d = abs(t_d * (1.0 - nr / n))
        if d > 1e-12 * t_d:
            scale = min(scale, d)
    return scale


def check_resolution(params: PacketParams, x: float, grid: TimeGrid) -> float:
    """Ratio dt / feature_scale.

    Raises:
        ResolutionError: if the step exceeds the feature scale.
    """
    ratio = grid.dt / feature_scale(params, x)
    if ratio > 1.0:
        raise ResolutionError(
            f"grid step {grid.dt:g} exceeds the nearest-zero distance "
            f"{feature_scale(params, x):g}; use more samples"
        )
    return ratio


def kk_phase_from_modulus(params: PacketParams, x: float, grid: TimeGrid,
                          blaschke: Optional[BlaschkeProduct] = None, tail_order: int = 2,
                          eval_range=None, check_threshold: bool = True) -> SampledSignal:
    """Phase of chi reconstructed from log|chi| on ``grid``: -H[log|chi|] (+ arg B).

    Samples outside ``eval_range`` or the edge guard are filled with the
    tail model's phase and marked invalid.

    Raises:
        ThresholdError: beyond the analyticity threshold without ``blaschke``.
    """
    _require_analytic(params, x, blaschke, check_threshold)
    path = log_chi_path(params, x, grid)
    signal = SampledSignal.on_grid(grid, path.log_mod, ~path.flagged)
    ok = _eval_points(grid, eval_range)
    t = grid.times
    tail = None
    if tail_order:
        tail = lambda te: series_tail(params, x, te, grid.t0, grid.t_end, tail_order).real
    values = series_model(params, x, t, tail_order).imag
    if blaschke is not None:
        values = values + blaschke.arg(t)
    est = -hilbert_at(signal, t[ok], tail)
    if blaschke is not None:
        est = est + blaschke.arg(t[ok])
    values[ok] = est
    return SampledSignal.on_grid(grid, values, ok)


def kk_modulus_from_phase(params: PacketParams, x: float, grid: TimeGrid,
                          blaschke: Optional[BlaschkeProduct] = None, phase=None,
                          tail_order: int = 2, eval_range=None,
                          check_threshold: bool = True) -> SampledSignal:
    """log|chi| reconstructed from the phase on ``grid``: H[arg chi - arg B].

    Args:
        phase: phase samples on ``grid``; defaults to the directly computed,
            unwrapped arg chi.
    """
    _require_analytic(params, x, blaschke, check_threshold)
    t = grid.times
    if phase is None:
        phase = log_chi_path(params, x, grid).phase
    phase = np.asarray(phase, dtype=float)
    if phase.shape != t.shape:
        raise InputError("phase samples do not match the grid")
    if blaschke is not None:
        phase = phase - blaschke.arg(t)
    signal = SampledSignal.on_grid(grid, phase)
    ok = _eval_points(grid, eval_range)

    def tail(te):
        out = series_tail(params, x, te, grid.t0, grid.t_end, tail_order).imag if tail_order else 0.0
        if blaschke is not None:
            out = out - _blaschke_tail(blaschke, te, grid.t0, grid.t_end)
        return out

    values = series_model(params, x, t, tail_order).real
    values[ok] = hilbert_at(signal, t[ok], tail)
    return SampledSignal.on_grid(grid, values, ok)


@dataclass(frozen=True)
class KKReport:
    max_err: float
    rms_err: float
    converged: bool
    max_err_doubled: float
    ratio: float
    grid: TimeGrid
    eval_range: tuple
    with_blaschke: bool


@dataclass(frozen=True)
class KKComparison:
    """Samples of one reciprocal-relation comparison."""

    times: np.ndarray
    kk_phase: np.ndarray
    direct_phase: np.ndarray
    raw_phase: np.ndarray
    log_mod: np.ndarray
    blaschke_arg: np.ndarray

    @property
    def error(self) -> np.ndarray:
        return self.kk_phase - self.direct_phase


def kk_compare(params: PacketParams, x: float, grid: TimeGrid, with_blaschke: bool,
               eval_range, tail_order: int = 2) -> KKComparison:
    check_window(params, x, grid, tail_order)
    check_resolution(params, x, grid)
    b = BlaschkeProduct.for_scenario(params, x) if with_blaschke else None
    est = kk_phase_from_modulus(params, x, grid, b, tail_order, eval_range, check_threshold=False)
    path = log_chi_path(params, x, grid)
    ok = est.mask
    barg = b.arg(grid.times[ok]) if b is not None else np.zeros(int(ok.sum()))
    return KKComparison(grid.times[ok], est.values[ok], path.phase[ok], path.raw_phase[ok],
                        path.log_mod[ok], barg)


def kk_verify(params: PacketParams, x: float, grid: TimeGrid, with_blaschke: bool = False,
              eval_range=None, tail_order: int = 2,
              baseline: Optional[KKComparison] = None) -> KKReport:
    """Compare -H[log|chi|] (+ arg B) with the unwrapped direct arg chi.

    The comparison is repeated on a window of twice the length with twice
    the samples; ``converged`` means the maximum error dropped by at least
    1.5x, or is already below 1e-10.  ``baseline`` may carry an earlier
    :func:`kk_compare` result on ``grid`` to avoid recomputing it.
    """
    if eval_range is None:
        eval_range = (grid.t0, grid.t_end)
    cmp1 = baseline
    if cmp1 is None:
        cmp1 = kk_compare(params, x, grid, with_blaschke, eval_range, tail_order)
    cmp2 = kk_compare(params, x, grid.doubled(), with_blaschke, eval_range, tail_order)
    e1 = float(np.max(np.abs(cmp1.error)))
    e2 = float(np.max(np.abs(cmp2.error)))
    rms = float(np.sqrt(np.mean(cmp1.error**2)))
    ratio = e1 / e2 if e2 > 0 else math.inf
    converged = ratio >= CONVERGENCE_RATIO or e2 < ERROR_FLOOR
    return KKReport(e1, rms, converged, e2, ratio, grid, tuple(eval_range), with_blaschke)
