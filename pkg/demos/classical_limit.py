"""Classical scenario: far beyond the threshold, only asymptotic statements survive."""

import json

from wavekk import cli

pre = cli.get_preset("classical")
print(pre.notes)
print(json.dumps(cli.cmd_classical_report(pre.params, pre.x_obs), indent=2))
print(json.dumps(cli.discrepancy_report(), indent=2))
