"""Scenario presets, report builders and the ``wavekk`` command line.

Exit codes: 0 success, 2 bad input, 3 numerical non-convergence,
4 regime-guard violation.  ``WAVEKK_THREADS`` caps the worker threads
used by the Hilbert-transform quadrature.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import kk
from .core import (ConvergenceError, InputError, PacketParams, RegimeError, TimeGrid,
                   WavekkError, analyticity_threshold, derived_scales)
from .diff_fn import _wrap, exponent, log_chi, log1m_exp
from .output import csv_text, json_text, write_text
from .wavepacket import ReflectedState, log_reflected_psi
from .zeros import ZeroRecord, lower_half_count, zero_locations

FIELD_CAP = 10**8
# t_r / t_d above this voids the linearized classical formulas
CLASSICAL_RATIO = 1e-3


@dataclass(frozen=True)
class KKDefaults:
    t_min: float
    t_max: float
    samples: int
    eval_range: tuple
    tail_order: int = 2
    blaschke: bool = False

    @property
    def grid(self) -> TimeGrid:
        return TimeGrid.span(self.t_min, self.t_max, self.samples)


@dataclass(frozen=True)
class FieldDefaults:
    x_range: tuple
    t_range: tuple
    nx: int
    nt: int


@dataclass(frozen=True)
class ScenarioPreset:
    name: str
    params: PacketParams
    x_obs: float
    notes: tuple = ()
    kk: Optional[KKDefaults] = None
    field: Optional[FieldDefaults] = None
    zero_range: tuple = (-20, 20)
    polish: bool = True


def _presets() -> dict:
    electron = PacketParams(1.0, -5.0, 2.0, 2.0, "electron, atomic units")
    molecule = PacketParams(3.6e4, -10.0, 10.0, 0.3, "water molecule, atomic units")
    classical = PacketParams(1e31, -1.0, 1e33, 1e-11, "1 g ball at 100 m/s, mgs units over hbar")
    mol_window = (molecule.t_r - molecule.t_d, molecule.t_r + molecule.t_d)
    return {
        "electron": ScenarioPreset(
            "electron", electron, -1.5,
            notes=("m=1, a=-5, K=2, delta=2 in atomic units; observed at x=-1.5",),
            kk=KKDefaults(-400.0, 400.0, 2**15, (0.0, 20.0)),
            field=FieldDefaults((-30.0, 0.0), (0.0, 10.0), 301, 101),
        ),
        "molecule": ScenarioPreset(
            "molecule", molecule, -4.0,
            notes=("m=3.6e4 (water molecule), a=-10, K=10, delta=0.3; observed at x=-4",
                   "KK window sized for a sixth-order tail model; error reported on t_r +- t_d"),
            kk=KKDefaults(-1.5e6, 1.5e6, 2**18, mol_window, tail_order=6, blaschke=True),
            field=FieldDefaults((-25.0, 0.0), (0.0, 2 * molecule.t_r), 251, 101),
        ),
        "classical": ScenarioPreset(
            "classical", classical, -0.1,
            notes=("m = 1 g / hbar ~ 1e31, v = 100 so K = m v = 1e33, delta = 1e-11",
                   "a = -1 follows from t_r = 1e-2 at v = 100 (t_r = |a| / v)",
                   "zeros are not Newton-polished: their imaginary parts reach 1e40"),
            zero_range=(-10, 10),
            polish=False,
        ),
    }


PRESETS = _presets()


def get_preset(name: str) -> ScenarioPreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise InputError(f"unknown scenario {name!r}; choose from {sorted(PRESETS)}") from None


# ---------------------------------------------------------------- reports

def scales_report(params: PacketParams, x: float) -> dict:
    s = derived_scales(params, x)
    return {
        "params": params.to_dict(),
        "x": x,
        "t_r": s.t_r,
        "t_d": s.t_d,
        "E": s.E,
        "n_r": s.n_r,
        "analytic": analyticity_threshold(params, x),
        "lower_half_count": lower_half_count(params, x),
    }


def scales_json(preset: ScenarioPreset) -> str:
    """scales.json text for a preset; the golden files hold exactly this."""
    return json_text({"preset": preset.name, **scales_report(preset.params, preset.x_obs),
                      "notes": list(preset.notes)})


def zeros_csv(records: list[ZeroRecord]) -> str:
    rows = ((z.n, z.t.real, z.t.imag, z.half_plane, z.residual, z.polished) for z in records)
    return csv_text(["n", "t_re", "t_im", "half_plane", "residual", "polished"], rows)


def kk_csv(c: kk.KKComparison) -> str:
    rows = zip(c.times, c.log_mod, c.raw_phase, c.direct_phase, c.kk_phase, c.blaschke_arg, c.error)
    return csv_text(["t", "log_mod", "raw_phase", "direct_phase", "kk_phase", "blaschke_arg", "error"],
                    rows)


def kk_summary(report: kk.KKReport, tail_order: int) -> dict:
    g = report.grid
    return {
        "t_min": g.t0,
        "t_max": g.t_end,
        "samples": g.n,
        "eval_range": list(report.eval_range),
        "tail_order": tail_order,
        "blaschke": report.with_blaschke,
        "max_err": report.max_err,
        "rms_err": report.rms_err,
        "max_err_doubled": report.max_err_doubled,
        "ratio": report.ratio,
        "converged": report.converged,
    }


def cmd_classical_report(params: PacketParams, x: float) -> dict:
    """Order-of-magnitude phase report for a macroscopic projectile.

    Returns:
        dict with ``rate`` = |x| v / (delta^2 / 2) in rad per unit time,
        ``total_phase`` = pi n_r, and ``chi_at_zero`` describing chi'(0)
        in the log domain (``log_abs_minus_one`` is log|chi'(0) - 1|).
        Also the exact exponent slope d Im z/dt at t = 0 and the formal
        unreduced phase of chi' long after reflection.

    Raises:
        RegimeError: unless t_r / t_d < 1e-3.
    """
    s = derived_scales(params, x)
    ratio = s.t_r / s.t_d
    if not ratio < CLASSICAL_RATIO:
        raise RegimeError(f"classical formulas need t_r/t_d < {CLASSICAL_RATIO:g}; got {ratio:.3g}")
    z0 = complex(exponent(params, x, 0.0))
    lc0 = complex(log1m_exp(z0))
    t_late = 1e3 * s.t_r
    late = complex(log_chi(params, x, t_late, "chi_prime"))
    return {
        "rate": abs(x) * params.velocity / (params.delta**2 / 2.0),
        "total_phase": math.pi * s.n_r,
        "chi_at_zero": {
            "log_abs_minus_one": z0.real,
            "log10_abs_minus_one": z0.real / math.log(10.0),
            "log_mod": lc0.real,
            "phase": lc0.imag,
        },
        "exponent_slope": 2.0 * math.pi * s.n_r / s.t_d,
        "late_time": t_late,
        "late_formal_phase": late.imag,
        "t_r_over_t_d": ratio,
    }


def discrepancy_report() -> list[dict]:
    """Computed values that differ from the published reference values."""
    mol, cls = PRESETS["molecule"], PRESETS["classical"]
    cr = cmd_classical_report(cls.params, cls.x_obs)
    return [
        {"quantity": "molecule t_d", "computed": mol.params.t_d, "published": 3.1e3,
         "note": "t_d = 2 m delta^2 with m=3.6e4, delta=0.3"},
        {"quantity": "classical E", "computed": cls.params.energy, "published": 0.5e33,
         "note": "E = K^2 / (2 m) with m=1e31, K=1e33"},
        {"quantity": "classical log|chi'(0) - 1|", "computed": cr["chi_at_zero"]["log_abs_minus_one"],
         "published": -5e20,
         "note": "exponent written as 2 i pi n_r (t_r - i t_d)/(t - i t_d); the published value uses i pi n_r"},
        {"quantity": "classical late-time phase of chi'", "computed": cr["late_formal_phase"],
         "published": 1e32,
         "note": "formal phase Im z + pi tends to 2 pi n_r; total_phase reports pi n_r as published"},
    ]


def field_grid(params: PacketParams, x_range, t_range, nx: int, nt: int,
               state: Optional[ReflectedState] = None):
    """|Psi| and principal arg Psi on an x-t grid.

    Returns:
        (x, t, modulus, phase) with the two arrays shaped (nt, nx).
    """
    nx, nt = int(nx), int(nt)
    if nx < 2 or nt < 1:
        raise InputError("field grid needs nx >= 2 and nt >= 1")
    if nx * nt > FIELD_CAP:
        raise InputError(f"field grid of {nx * nt} points exceeds the cap of {FIELD_CAP}")
    x_lo, x_hi = map(float, x_range)
    if not (x_lo < x_hi <= 0):
        raise InputError(f"x range must satisfy x_min < x_max <= 0, got {x_range}")
    t_lo, t_hi = map(float, t_range)
    if not (t_hi >= t_lo) or (nt > 1 and t_hi == t_lo):
        raise InputError(f"bad t range {t_range}")
    if state is None:
        state = ReflectedState.from_params(params)
    x = np.linspace(x_lo, x_hi, nx)
    t = np.linspace(t_lo, t_hi, nt)
    lp = log_reflected_psi(state, x[None, :], t[:, None])
    return x, t, np.exp(lp.real), np.where(np.isfinite(lp.real), _wrap(lp.imag), 0.0)


def cmd_field(params: PacketParams, x_range, t_range, nx: int, nt: int) -> str:
    """field.csv text: one row per (t, x) with t the slow index."""
    x, t, mod, ph = field_grid(params, x_range, t_range, nx, nt)
    xx, tt = np.meshgrid(x, t)
    rows = zip(xx.ravel(), tt.ravel(), mod.ravel(), ph.ravel())
    return csv_text(["x", "t", "abs_psi", "arg_psi"], rows)


def cmd_scenario(name: str, out_dir: str | Path) -> list[Path]:
    """Write the report files of one preset into ``out_dir``."""
    p = get_preset(name)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {}
    files["scales.json"] = scales_json(p)
    lo, hi = p.zero_range
    files["zeros.csv"] = zeros_csv(zero_locations(p.params, p.x_obs, lo, hi, polish=p.polish))
    if p.kk is not None:
        d = p.kk
        grid = d.grid
        cmp = kk.kk_compare(p.params, p.x_obs, grid, d.blaschke, d.eval_range, d.tail_order)
        report = kk.kk_verify(p.params, p.x_obs, grid, d.blaschke, d.eval_range, d.tail_order,
                              baseline=cmp)
        files["kk.csv"] = kk_csv(cmp)
        files["kk_summary.json"] = json_text(kk_summary(report, d.tail_order))
    else:
        files["classical.json"] = json_text(cmd_classical_report(p.params, p.x_obs))
    if p.field is not None:
        f = p.field
        files["field.csv"] = cmd_field(p.params, f.x_range, f.t_range, f.nx, f.nt)
    files["discrepancies.json"] = json_text(discrepancy_report())
    written = []
    for fname, text in files.items():
        write_text(out / fname, text)
        written.append(out / fname)
    return written


# ---------------------------------------------------------------- argparse

def _params(args) -> PacketParams:
    return PacketParams.from_json(args.params)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


def _run_scenario(args):
    for path in cmd_scenario(args.name, args.out):
        print(path)


def _run_zeros(args):
    recs = zero_locations(_params(args), args.x, args.n_min, args.n_max, polish=not args.no_polish)
    _emit(zeros_csv(recs), args.out)


def _run_kk(args):
    params = _params(args)
    grid = TimeGrid.span(args.t_min, args.t_max, args.samples)
    er = (args.eval_min if args.eval_min is not None else grid.t0,
          args.eval_max if args.eval_max is not None else grid.t_end)
    if not args.blaschke:
        kk._require_analytic(params, args.x, None, True)
    cmp = kk.kk_compare(params, args.x, grid, args.blaschke, er, args.tail_order)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_text(out / "kk.csv", kk_csv(cmp))
    if args.verify:
        report = kk.kk_verify(params, args.x, grid, args.blaschke, er, args.tail_order,
                              baseline=cmp)
        summary = kk_summary(report, args.tail_order)
    else:
        err = cmp.error
        summary = {"t_min": grid.t0, "t_max": grid.t_end, "samples": grid.n,
                   "eval_range": list(er), "tail_order": args.tail_order,
                   "blaschke": args.blaschke, "max_err": float(np.max(np.abs(err))),
                   "rms_err": float(np.sqrt(np.mean(err**2)))}
    text = json_text(summary)
    if args.out:
        write_text(Path(args.out) / "kk_summary.json", text)
    else:
        sys.stdout.write(text)


def _run_field(args):
    _emit(cmd_field(_params(args), (args.x_min, args.x_max), (args.t_min, args.t_max),
                    args.nx, args.nt), args.out)


def _run_threshold(args):
    sys.stdout.write(json_text(scales_report(_params(args), args.x)))


def _run_classical(args):
    sys.stdout.write(json_text(cmd_classical_report(_params(args), args.x)))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wavekk", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("scenario", help="write all reports for a preset")
    s.add_argument("name", choices=sorted(PRESETS))
    s.add_argument("--out", required=True, help="output directory")
    s.set_defaults(func=_run_scenario)

    def with_params(p, x=True):
        p.add_argument("--params", required=True, help="JSON file with m, a, K, delta, label")
        if x:
            p.add_argument("--x", type=float, required=True, help="observation point (< 0)")

    s = sub.add_parser("zeros", help="closed-form zeros of chi'")
    with_params(s)
    s.add_argument("--n-min", type=int, required=True)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--no-polish", action="store_true")
    s.add_argument("--out", help="CSV file (default stdout)")
    s.set_defaults(func=_run_zeros)

    s = sub.add_parser("kk", help="reciprocal-relation check on a time window")
    with_params(s)
    s.add_argument("--t-min", type=float, required=True)
    s.add_argument("--t-max", type=float, required=True)
    s.add_argument("--samples", type=int, required=True)
    s.add_argument("--eval-min", type=float)
    s.add_argument("--eval-max", type=float)
    s.add_argument("--tail-order", type=int, default=2, choices=(0, 1, 2, 4, 6))
    s.add_argument("--blaschke", action="store_true", help="remove lower-half zeros")
    s.add_argument("--verify", action="store_true", help="repeat on a doubled grid")
    s.add_argument("--out", help="directory for kk.csv and kk_summary.json")
    s.set_defaults(func=_run_kk)

    s = sub.add_parser("field", help="|Psi| over an x-t grid")
    with_params(s, x=False)
    s.add_argument("--x-min", type=float, default=-15.0)
    s.add_argument("--x-max", type=float, default=0.0)
    s.add_argument("--t-min", type=float, default=0.0)
    s.add_argument("--t-max", type=float, default=10.0)
    s.add_argument("--nx", type=int, default=151)
    s.add_argument("--nt", type=int, default=101)
    s.add_argument("--out", help="CSV file (default stdout)")
    s.set_defaults(func=_run_field)

    s = sub.add_parser("threshold", help="scales and the analyticity verdict")
    with_params(s)
    s.set_defaults(func=_run_threshold)

    s = sub.add_parser("classical", help="asymptotic phase report (t_r << t_d only)")
    with_params(s)
    s.set_defaults(func=_run_classical)
    return ap


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, RegimeError):
        return 4
    if isinstance(exc, ConvergenceError):
        return 3
    if isinstance(exc, (InputError, OSError)):
        return 2
    return 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (WavekkError, OSError) as exc:
        print(f"wavekk: error: {exc}", file=sys.stderr)
        return exit_code(exc)
    return 0


if __name__ == "__main__":
    sys.exit(main())
