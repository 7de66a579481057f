"""
Running a figure experiment
===========================

Every figure ships as a spec file. ``run_experiment`` yields one point per
series and sweep value with the simulated rate, a 95% interval and the
closed-form value; ``emit_csv`` and ``emit_plot`` write the results.
The same run is available as ``cliquemem experiment --figure fig3a``.
"""

import sys
from dataclasses import replace

from cliquemem.harness import emit_csv, emit_plot, preset, run_experiment

# a quicker version of the blind-recovery figure
spec = replace(preset("fig3a"), sweep=[60_000, 100_000, 140_000], trials=500, max_trials=500, min_errors=0)
points = list(run_experiment(spec))
emit_csv(points, sys.stdout)
emit_plot(points, "fig3a_quick.svg", spec.mode, title="blind recovery, 3 of 12 erased")
print("plot written to fig3a_quick.svg")
