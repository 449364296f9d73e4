"""Electron scenario: |psi| of the reflected packet as a coarse text plot."""

import numpy as np

from wavekk import cli

pre = cli.get_preset("electron")
x, t, mod, _ = cli.field_grid(pre.params, (-30, 0), (0, 10), 61, 6)
shades = " .:-=+*#%@"
for k, tk in enumerate(t):
    row = mod[k] / mod.max()
    print(f"t={tk:4.1f} |" + "".join(shades[min(int(v * 10), 9)] for v in row) + "|")
print("peak x per frame:", np.round(x[mod.argmax(axis=1)], 2))
