"""Molecule scenario: twelve zeros cross below the axis; the argument principle counts them."""

import math

from wavekk import cli
from wavekk.zeros import HalfPlane, Rectangle, lower_half_count, winding_number, zero_locations

pre = cli.get_preset("molecule")
p, x = pre.params, pre.x_obs
print(f"t_r={p.t_r:g}  t_d={p.t_d:g}  n_r={abs(x) * p.K / math.pi:.4f}")

for z in zero_locations(p, x, 10, 15):
    print(f"n={z.n:2d}  t={z.t.real:12.2f} {z.t.imag:+10.2f}j  {z.half_plane.value}")

lower = [z for z in zero_locations(p, x, 1, 20) if z.half_plane is HalfPlane.LOWER]
rect = Rectangle(3e4, 5e5, -8e4, -100)
print("formula count:", lower_half_count(p, x), " listed:", len(lower),
      " winding:", winding_number(p, x, rect, samples_per_edge=20000))
