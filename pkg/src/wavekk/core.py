"""Scenario parameters, characteristic time scales and the analyticity threshold.

All quantities use the reduced convention in which Planck's constant is
divided out: ``m`` is the physical mass over hbar, ``K`` the mean wavenumber
and energies are angular frequencies.  No unit system is carried at runtime;
callers (and the presets) supply numbers that are already reduced.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np


class WavekkError(Exception):
    """Base class for all errors raised by this package."""


class InputError(WavekkError, ValueError):
    """Bad user input: domain violations, malformed parameter files."""


class SingularTimeError(InputError):
    """Evaluation requested at (or too close to) the branch point t = i t_d."""


class ConvergenceError(WavekkError, ArithmeticError):
    """A numerical procedure did not reach its stated tolerance."""


class RegimeError(WavekkError):
    """Inputs fall outside the regime in which a formula is valid."""


@dataclass(frozen=True)
class PacketParams:
    """One physical scenario.

    Args:
        m: reduced mass (physical mass / hbar).
        a: initial packet centre, negative (left of the barrier).
        K: mean wavenumber, positive (moving right).
        delta: initial half-width of the Gaussian.
        label: free text describing the units.
    """

    m: float
    a: float
    K: float
    delta: float
    label: str = ""

    def __post_init__(self):
        for name in ("m", "a", "K", "delta"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise InputError(f"{name} must be a finite number, got {value!r}")
        if self.m <= 0:
            raise InputError(f"m must be positive, got {self.m}")
        if self.delta <= 0:
            raise InputError(f"delta must be positive, got {self.delta}")
        if self.K <= 0:
            raise InputError(f"K must be positive, got {self.K}")
        if self.a >= 0:
            raise InputError(f"a must be negative (start left of the barrier), got {self.a}")

    @property
    def velocity(self) -> float:
        return self.K / self.m

    @property
    def t_r(self) -> float:
        """Time at which the packet centre reaches the barrier."""
        return self.m * abs(self.a) / self.K

    @property
    def t_d(self) -> float:
        """Dispersion time of the free packet."""
        return 2.0 * self.m * self.delta**2

    @property
    def energy(self) -> float:
        return self.K**2 / (2.0 * self.m)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "PacketParams":
        missing = {"m", "a", "K", "delta"} - set(data)
        if missing:
            raise InputError(f"parameter file missing keys: {sorted(missing)}")
        try:
            return cls(
                m=float(data["m"]),
                a=float(data["a"]),
                K=float(data["K"]),
                delta=float(data["delta"]),
                label=str(data.get("label", "")),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"invalid parameter value: {exc}") from exc

    @classmethod
    def from_json(cls, path: str | Path) -> "PacketParams":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read parameter file {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise InputError("parameter file must hold a JSON object")
        return cls.from_dict(data)


# Complex times are ordinary Python/numpy complex values, t = t' + i t''.
ComplexTime = complex


@dataclass(frozen=True)
class DerivedScales:
    t_r: float
    t_d: float
    E: float
    n_r: float


def _check_x(x: float) -> None:
    if not np.isfinite(x) or x >= 0:
        raise InputError(f"observation point must satisfy x < 0, got {x}")


def n_r(params: PacketParams, x: float) -> float:
    """Dimensionless zero-count parameter |x| K / pi."""
    _check_x(x)
    return abs(x) * params.K / math.pi


def derived_scales(params: PacketParams, x: float) -> DerivedScales:
    _check_x(x)
    return DerivedScales(t_r=params.t_r, t_d=params.t_d, E=params.energy, n_r=n_r(params, x))


def analyticity_threshold(params: PacketParams, x: float) -> bool:
    """True when no difference-function zero lies in the lower half t-plane.

    Equivalent to ``|x| p < pi hbar``.  Decided with the same real-axis
    tolerance that :mod:`wavekk.zeros` uses for classifying zeros, so that
    ``analyticity_threshold(p, x) == (lower_half_count(p, x) == 0)`` holds
    exactly, including at integer ``n_r``.
    """
    from .zeros import lower_half_count

    return lower_half_count(params, x) == 0


@dataclass(frozen=True)
class TimeGrid:
    """Uniform real-time grid ``t0 + k*dt`` for ``k = 0..n-1``."""

    t0: float
    dt: float
    n: int

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise InputError(f"grid step must be positive, got {self.dt}")
        if self.n < 2:
            raise InputError("grid needs at least two samples")

    @classmethod
    def span(cls, t_min: float, t_max: float, n: int) -> "TimeGrid":
        if not t_max > t_min:
            raise InputError(f"empty time window [{t_min}, {t_max}]")
        if n < 2:
            raise InputError("grid needs at least two samples")
        return cls(float(t_min), (t_max - t_min) / (n - 1), int(n))

    @property
    def t_end(self) -> float:
        return self.t0 + (self.n - 1) * self.dt

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n)

    def doubled(self) -> "TimeGrid":
        """Window of twice the length about the same centre, with 2n samples."""
        centre = 0.5 * (self.t0 + self.t_end)
        half = self.t_end - self.t0
        return TimeGrid.span(centre - half, centre + half, 2 * self.n)
