import math

import numpy as np
import pytest

import oracles
from wavekk import zeros as zmod
from wavekk.core import InputError, PacketParams
from wavekk.diff_fn import chi_prime
from wavekk.zeros import (HalfPlane, PolishDivergenceError, Rectangle, WindingResolutionError,
                          lower_half_count, lower_half_zeros, winding_number, zero_locations,
                          zeros_inside)


def test_electron_first_zero(electron):
    (z,) = zero_locations(electron.params, electron.x_obs, 1, 1)
    assert z.t.real == pytest.approx(2.3873, abs=1e-4)
    assert z.t.imag == pytest.approx(0.3606, abs=1e-4)
    assert z.half_plane is HalfPlane.UPPER


def test_electron_formula(electron):
    for z in zero_locations(electron.params, electron.x_obs, 1, 5):
        n = z.n
        assert z.t.real == pytest.approx(7.5 / (math.pi * n), rel=1e-13)
        assert z.t.imag == pytest.approx(8 * (1 - 3 / (math.pi * n)), rel=1e-13)


@pytest.mark.parametrize("which", ["electron", "molecule"])
def test_matches_packet_oracle(which, request):
    pre = request.getfixturevalue(which)
    p, x = pre.params, pre.x_obs
    for z in zero_locations(p, x, -15, 15):
        ref = oracles.zero_from_packet(p.m, p.a, p.K, p.delta, x, z.n)
        assert abs(z.t - ref) < 1e-12 * abs(ref)
        assert z.residual < 1e-10
        assert abs(complex(chi_prime(p, x, z.t))) < 1e-10


def test_molecule_crossing(molecule):
    recs = {z.n: z for z in zero_locations(molecule.params, molecule.x_obs, 11, 14)}
    assert recs[12].t.imag < 0 and recs[12].half_plane is HalfPlane.LOWER
    assert recs[13].t.imag > 0 and recs[13].half_plane is HalfPlane.UPPER
    assert lower_half_count(molecule.params, molecule.x_obs) == 12
    assert len(lower_half_zeros(molecule.params, molecule.x_obs)) == 12


def test_census_identity_random():
    rng = np.random.default_rng(3)
    for _ in range(50):
        p = PacketParams(10 ** rng.uniform(-1, 4), -10 ** rng.uniform(-1, 2),
                         10 ** rng.uniform(-1, 1.5), 10 ** rng.uniform(-1, 0.5))
        x = -10 ** rng.uniform(-1, 1)
        count = lower_half_count(p, x)
        if count <= 40:
            lower = [z for z in zero_locations(p, x, 1, max(count, 1) + 2)
                     if z.half_plane is HalfPlane.LOWER]
            assert len(lower) == count


def test_integer_n_r_real_axis():
    p = PacketParams(1.0, -1.0, 2 * math.pi, 0.5)
    recs = zero_locations(p, -1.0, 1, 3)
    assert [z.half_plane for z in recs] == [HalfPlane.LOWER, HalfPlane.REAL_AXIS, HalfPlane.UPPER]
    assert lower_half_count(p, -1.0) == 1


def test_index_asymptotics(electron):
    p, x = electron.params, electron.x_obs
    for sign in (1, -1):
        gaps = [abs(zmod.zero_formula(p, x, sign * n).imag - p.t_d) for n in (10, 10**3, 10**6)]
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] < 1e-5 * p.t_d


def test_bad_indices(electron):
    with pytest.raises(InputError):
        zero_locations(electron.params, electron.x_obs, 3, 2)
    with pytest.raises(InputError):
        zmod.zero_formula(electron.params, electron.x_obs, 0)
    assert [z.n for z in zero_locations(electron.params, electron.x_obs, -1, 1)] == [-1, 1]


def test_polish_divergence(electron, monkeypatch):
    real = zmod.zero_formula
    monkeypatch.setattr(zmod, "zero_formula", lambda p, x, n: real(p, x, n) * (1 + 1e-3))
    with pytest.raises(PolishDivergenceError):
        zero_locations(electron.params, electron.x_obs, 1, 1)


def test_winding_examples(electron):
    p, x = electron.params, electron.x_obs
    assert winding_number(p, x, Rectangle(2.2, 2.6, 0.2, 0.5)) == 1
    assert winding_number(p, x, Rectangle(-50, 50, -40, -0.5)) == 0
    with pytest.raises(InputError):
        winding_number(p, x, Rectangle(-1, 1, 7, 9))


def test_winding_too_coarse(molecule):
    rect = Rectangle(3e4, 5e5, -8e4, -100)
    with pytest.raises(WindingResolutionError):
        winding_number(molecule.params, molecule.x_obs, rect, samples_per_edge=20)


def _oracle_count(p, x, rect, n_max):
    pts = [oracles.zero_from_packet(p.m, p.a, p.K, p.delta, x, n)
           for n in range(-n_max, n_max + 1) if n]
    return sum(rect.contains(t) for t in pts), pts


def _random_rectangles(p, x, rng, re_span, im_span, k):
    t_d = p.t_d
    out = []
    while len(out) < k:
        r0, r1 = np.sort(rng.uniform(*re_span, 2))
        i0, i1 = np.sort(rng.uniform(*im_span, 2))
        if r1 - r0 < 1e-3 * t_d or i1 - i0 < 1e-3 * t_d:
            continue
        rect = Rectangle(r0, r1, i0, i1)
        if rect.contains(1j * t_d) or rect.boundary_distance(1j * t_d) < 0.3 * t_d:
            continue
        rho = rect.boundary_distance(1j * t_d)
        n_max = int(abs(x) * p.K / math.pi * abs(complex(p.t_r, -t_d)) / rho) + 2
        count, pts = _oracle_count(p, x, rect, n_max)
        if min(rect.boundary_distance(t) for t in pts) < 1e-3 * t_d:
            continue
        out.append((rect, count))
    return out


@pytest.mark.parametrize("which,re_span,im_span", [
    ("electron", (-8, 8), (-10, 40)),
    ("molecule", (-7e5, 7e5), (-1.2e5, 1.2e5)),
])
def test_random_rectangles_agree(which, re_span, im_span, request):
    pre = request.getfixturevalue(which)
    p, x = pre.params, pre.x_obs
    rng = np.random.default_rng(11)
    rects = _random_rectangles(p, x, rng, re_span, im_span, 24)
    nonzero = 0
    for rect, expected in rects:
        for samples in (2000, 20000, 200000):
            try:
                got = winding_number(p, x, rect, samples)
                break
            except WindingResolutionError:
                continue
        else:
            pytest.fail(f"could not resolve winding on {rect}")
        assert got == expected, rect
        assert zeros_inside(p, x, rect) == expected
        nonzero += expected > 0
    assert nonzero >= 3
