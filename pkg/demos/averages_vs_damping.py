"""
Mean energy change, work and heat against relaxation probability
=================================================================
"""

import numpy as np

from qthermo import ExperimentConfig, direct_averages, pipeline_averages, tmp_averages, tmp_distribution

print(f"{'p':>5} {'<dU>':>9} {'<W>':>9} {'<Q>':>9} {'residual':>10} {'TMP <Q>':>9} {'direct <Q>':>10}")
for p in np.linspace(0, 1, 11):
    cfg = ExperimentConfig(p=float(p))
    reports, cons = pipeline_averages(cfg)
    tmp = tmp_averages(tmp_distribution(cfg))
    direct = direct_averages(cfg)
    print(
        f"{p:5.2f} {reports['du'].mean:9.5f} {reports['w'].mean:9.5f} {reports['q'].mean:9.5f}"
        f" {cons.residual:10.1e} {tmp['q']:9.5f} {direct['q']:10.5f}"
    )

# The two-measurement heat departs from the detector heat between the end points:
# the first projective measurement erases the coherence that steers the second relaxation.
