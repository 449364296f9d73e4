"""Electron scenario: arg chi recovered from log|chi| with a Hilbert transform."""

import numpy as np

from wavekk import cli, kk

pre = cli.get_preset("electron")
p, x, d = pre.params, pre.x_obs, pre.kk

c = kk.kk_compare(p, x, d.grid, False, d.eval_range, d.tail_order)
for i in np.linspace(0, c.times.size - 1, 9).astype(int):
    print(f"t={c.times[i]:7.3f}  direct={c.direct_phase[i]:+.9f}  kk={c.kk_phase[i]:+.9f}")

# doubling window and samples together tests truncation of the infinite integral
r = kk.kk_verify(p, x, d.grid, False, d.eval_range, d.tail_order, baseline=c)
print(f"max err {r.max_err:.2e} -> {r.max_err_doubled:.2e} (ratio {r.ratio:.2f}), converged={r.converged}")
