"""Reflected Gaussian wave packets and time-domain reciprocal relations."""

from .core import (ComplexTime, ConvergenceError, DerivedScales, InputError, PacketParams,
                   RegimeError, SingularTimeError, TimeGrid, WavekkError, analyticity_threshold,
                   derived_scales, n_r)
from .diff_fn import LogChiPath, UnwrapError, chi, chi_prime, exponent, log_chi, log_chi_path
from .kk import (BlaschkeProduct, KKReport, SampledSignal, ThresholdError, blaschke_arg,
                 hilbert_at, hilbert_pv, kk_modulus_from_phase, kk_phase_from_modulus, kk_verify)
from .wavepacket import (ReflectedState, free_psi, free_psi_polar, normalization,
                         reflected_psi)
from .zeros import (HalfPlane, Rectangle, ZeroRecord, lower_half_count, winding_number,
                    zero_locations)

__version__ = "0.1.0"

__all__ = [
    "ComplexTime", "ConvergenceError", "DerivedScales", "InputError", "PacketParams",
    "RegimeError", "SingularTimeError", "TimeGrid", "WavekkError", "analyticity_threshold",
    "derived_scales", "n_r",
    "LogChiPath", "UnwrapError", "chi", "chi_prime", "exponent", "log_chi", "log_chi_path",
    "BlaschkeProduct", "KKReport", "SampledSignal", "ThresholdError", "blaschke_arg",
    "hilbert_at", "hilbert_pv", "kk_modulus_from_phase", "kk_phase_from_modulus", "kk_verify",
    "ReflectedState", "free_psi", "free_psi_polar", "normalization", "reflected_psi",
    "HalfPlane", "Rectangle", "ZeroRecord", "lower_half_count", "winding_number",
    "zero_locations",
]
