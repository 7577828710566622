"""
Quasi-probability densities at three relaxation strengths
=========================================================

Sweep the detector phase for each scheme, transform to a density and list
the weight found at every multiple of half a quantum.
"""

import numpy as np

from qthermo import SCHEMES, ExperimentConfig, negativity, peak_weights, qpdf, sweep

np.set_printoptions(precision=4, suppress=True)

for p in (0.0, 0.5, 1.0):
    cfg = ExperimentConfig(p=p)
    print(f"\np = {p}")
    print("scheme  " + "  ".join(f"{e:+6.1f}" for e in np.arange(-2, 2.5, 0.5)) + "   min P   negative")
    for scheme in SCHEMES:
        table = sweep(scheme, cfg)
        peaks = peak_weights(table)
        report = negativity(qpdf(table))
        row = "  ".join(f"{w:+6.3f}" for w in peaks.weights)
        print(f"{scheme.value:>6}  {row}  {report.min_density:+7.3f}   {report.negative}")

# Without relaxation the energy-change density carries a negative weight at +1/2,
# a trace of the initial coherence.  Full relaxation leaves only whole quanta.
