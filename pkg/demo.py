import logging
import sys

import numpy as np

import mcspeedup as mcs
from mcspeedup import plotting, saving

# capture mcspeedup logs
logging.basicConfig(stream=sys.stdout, level=logging.INFO)

# 256 BCE, a highly parallel workload that pays for communication
# (f1 grows as the square root of the core count) and synchronization
n = 256
workload = mcs.WorkloadModel(
    f=0.999,
    conn=mcs.PowerLaw(0.001, 0.5),
    sync=mcs.PowerLaw(0.01),
)

# speedup versus core size, next to the Hill-Marty reference
r = np.geomspace(1, n, 65)
budget = mcs.ChipBudget(n, r)
ours = mcs.speedup_sym(budget, workload)
reference = mcs.baselines.hm_speedup(budget, workload.f)
nc = budget.cores()
curves = [
    mcs.SpeedupCurve("ours__f=0.999", r, r, nc, ours),
    mcs.SpeedupCurve("hill-marty__f=0.999", r, r, nc, reference),
]

# larger cores pay off once data movement is accounted for
best = mcs.optimal_r_numeric(lambda r: mcs.speedup_sym(mcs.ChipBudget(n, r), workload), n)
hm_best = mcs.optimizing.optimal_r_hm_sym(n, workload.f)
print(f"optimal core size {best.r_opt:.3g} BCE (Hill-Marty: {hm_best.r_opt:.3g} BCE)")
print(mcs.advise_schedule(n, workload))

# simulate the FFT on the same budget and compare with the model
sweep = mcs.speedup_curve_sim("fft", 256)
print(f"FFT synchronization intensity {sweep.runs[0].report.f2_measured:g}")

# write datasets and figures to the demo directory
with saving.out_dir("demo"):
    saving.save_curves(curves, "demo")
    saving.save_curves(list(sweep.curves), "demo_fft")
    saving.save_fig(plotting.plot_panels(curves, "demo"))
    saving.save_fig(plotting.plot_sweep(sweep))
