"""Electron scenario: derived scales and the zeros of chi' in the complex t-plane."""

from wavekk import cli
from wavekk.zeros import lower_half_count, zero_locations

pre = cli.get_preset("electron")
p, x = pre.params, pre.x_obs
print(cli.scales_json(pre))

# zeros sit at t_r n_r/n + i t_d (1 - n_r/n); with n_r < 1 every one is above the axis
for z in zero_locations(p, x, -5, 5):
    print(f"n={z.n:+d}  t={z.t.real:+.6f}{z.t.imag:+.6f}j  {z.half_plane.value}  residual={z.residual:.1e}")
print("zeros below the axis:", lower_half_count(p, x))
