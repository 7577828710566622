"""
Two-measurement statistics next to the detector densities
=========================================================

The initial energy measurement turns the coherent state into a Born mixture.
Running the detector pipeline on that mixture reproduces the two-measurement
probabilities peak by peak.
"""

import numpy as np

from qthermo import PEAK_ENERGIES, ExperimentConfig, initial_weights, peak_weights, sweep, tmp_distribution

cfg = ExperimentConfig(p=0.5)
dist = tmp_distribution(cfg)
plus, minus = initial_weights(cfg)
print(f"Born weights of |+>, |->: {plus:.5f}, {minus:.5f}")

for scheme, key in (("q", "q"), ("du", "du")):
    coherent = peak_weights(sweep(scheme, cfg)).weights
    mixed = sum(
        w * peak_weights(sweep(scheme, cfg.replace(theta=np.pi / 2, phi=phi))).weights
        for phi, w in ((0.0, plus), (np.pi, minus))
    )
    mass = dist.mass(key)
    print(f"\n{key}:   E   coherent   dephased   TMP")
    for e, a, b in zip(PEAK_ENERGIES, coherent, mixed):
        print(f"   {e:+5.1f}   {a:+8.5f}   {b:+8.5f}   {mass.get(e, 0.0):8.5f}")
