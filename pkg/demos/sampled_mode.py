"""
Finite-shot estimates of the averages
=====================================

Each readout is a binomial draw of 8000 shots; the slope of Im G at the first
grid point estimates the mean with error 1/(chi_bar sqrt(N)).
"""

import numpy as np

from qthermo import ExperimentConfig, pipeline_averages

exact, _ = pipeline_averages(ExperimentConfig(p=0.5))
runs = [pipeline_averages(ExperimentConfig(p=0.5, mode="sampled", seed=s)) for s in range(30)]

for key in ("du", "w", "q"):
    means = np.array([r[key].mean for r, _ in runs])
    print(f"{key:>2}: exact {exact[key].mean:+.4f}  sampled {means.mean():+.4f} +- {means.std(ddof=1):.4f}"
          f"  (predicted {runs[0][0][key].stderr:.4f})")

residuals = np.array([c.residual / c.stderr for _, c in runs])
print(f"conservation residual in units of its error: max |r| = {np.max(np.abs(residuals)):.2f}")
