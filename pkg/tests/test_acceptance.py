"""Acceptance criteria, one test each.

Every test appends a PASS/FAIL line that the pytest summary prints under
"acceptance criteria".  Run directly with ``python3 tests/test_acceptance.py``.
"""

import sys
import time

import numpy as np
import pytest
from conftest import ACCEPTANCE_LINES, DEFAULTS, P_GRID, cached_sweep
from oracles import partial_trace, random_qubit_state

from qthermo import gates, spectral
from qthermo.protocol import SCHEMES, SchemeKind, direct_averages, sweep
from qthermo.simulator import product_state, run_circuit
from qthermo.tmp import tmp_averages, tmp_distribution

DU, W, Q = SchemeKind.INTERNAL_ENERGY, SchemeKind.WORK, SchemeKind.HEAT


def record(number, title, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}")
    assert ok, detail


def test_1_channel_fidelity():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    worst = 0.0
    for p in P_GRID:
        circuit = gates.relaxation_circuit(gates.ChannelSpec(p, "Z", env=1))
        for _ in range(10):
            v = random_qubit_state(rng)
            rho_in = np.outer(v, v.conj())
            rho_out = partial_trace(run_circuit(product_state(v, [1, 0]), circuit), [0], 2)
            worst = max(worst, np.max(np.abs(rho_out - gates.kraus_oracle(p, rho_in))))
    elapsed = time.perf_counter() - start
    record(1, "channel fidelity", worst < 1e-12 and elapsed < 1.0, f"max deviation {worst:.1e}, {elapsed:.3f} s")


def test_2_energy_conservation():
    exact = {p: spectral.pipeline_averages(DEFAULTS.replace(p=p))[1].residual for p in (0.0, 0.5, 1.0)}
    worst = max(abs(r) for r in exact.values())
    hits = 0
    for seed in range(100):
        _, cons = spectral.pipeline_averages(DEFAULTS.replace(mode="sampled", seed=seed))
        hits += abs(cons.residual) <= 3 * cons.stderr
    ok = worst < 1e-6 and hits >= 95
    record(2, "energy conservation", ok, f"exact max residual {worst:.1e}; sampled within 3 sigma {hits}/100")


def test_3_p0_phenomenology():
    heat = spectral.renormalize_peaks(spectral.peak_weights(cached_sweep(Q, 0.0))).weight(0.0)
    gap = np.max(np.abs(cached_sweep(DU, 0.0).values - cached_sweep(W, 0.0).values))
    ok = heat > 0.99 and gap < 1e-9
    record(3, "p=0 heat peak and dU = W", ok, f"heat w(0) = {heat:.6f}; max |G_du - G_w| = {gap:.1e}")


def near_half(regions, tol=0.1):
    return any(lo - tol <= e <= hi + tol for lo, hi in regions for e in (-0.5, 0.5))


def test_4_negativity_at_p0():
    details, ok = [], True
    for scheme in (DU, W):
        report = spectral.negativity(spectral.qpdf(cached_sweep(scheme, 0.0)))
        hit = report.negative and near_half(report.regions)
        ok &= hit
        details.append(
            f"{scheme.value}: min {report.min_density:.3f} vs floor {report.floor:.1e}, regions {report.regions}"
        )
    record(4, "negativity at p=0", ok, "; ".join(details))


def test_5_classical_limit():
    cfg = DEFAULTS.replace(p=1.0)
    worst_half, negative = 0.0, False
    for scheme in (DU, W):
        table = cached_sweep(scheme, 1.0)
        peaks = spectral.peak_weights(table)
        half = max(abs(peaks.weight(e)) for e in (-1.5, -0.5, 0.5, 1.5)) / abs(peaks.norm)
        worst_half = max(worst_half, half)
        negative |= spectral.negativity(spectral.qpdf(table)).negative
    reports, _ = spectral.pipeline_averages(cfg)
    tmp = tmp_averages(tmp_distribution(cfg))
    gap = max(abs(reports[k].mean - tmp[k]) for k in ("du", "w", "q"))
    ok = worst_half < 0.01 and not negative and gap < 1e-6
    record(5, "classical limit at p=1", ok,
           f"max half-integer weight {worst_half:.1e} of norm; negative={negative}; |pipeline - TMP| {gap:.1e}")


def test_6_heat_classical_for_all_p():
    ok, parts = True, []
    for p in P_GRID:
        dens = spectral.qpdf(cached_sweep(Q, p))
        report = spectral.negativity(dens)
        half = np.isin(dens.energies, [-1.5, -0.5, 0.5, 1.5])
        worst = float(np.max(np.abs(dens.density[half])))
        ok &= (not report.negative) and worst < report.floor
        parts.append(f"p={p}: |P(half)| {worst:.1e} < floor {report.floor:.1e}, negative={report.negative}")
    record(6, "heat classical for all p", ok, "; ".join(parts))


def grid_derivative(scheme, p, dchi):
    return spectral.average_from_derivative(cached_sweep(scheme, p, dchi, dchi)).mean


def test_7_moment_oracle_agreement():
    ok, worst_rel, ratios, notes = True, 0.0, [], []
    for p in P_GRID:
        truth = direct_averages(DEFAULTS.replace(p=p))
        for scheme in SCHEMES:
            exact = truth[scheme.value]
            coarse, fine = grid_derivative(scheme, p, 0.1), grid_derivative(scheme, p, 0.05)
            if abs(exact) < 1e-12:
                # <Q> vanishes at p=0 and the derivative is exactly zero too
                ok &= abs(coarse) < 1e-12
                continue
            ratio = (coarse - exact) / (fine - exact)
            ratios.append(ratio)
            ok &= 3.5 < ratio < 4.5
            rel = abs(coarse - exact) / abs(exact)
            if p == 0.0:
                notes.append(f"{scheme.value}@p=0 rel {rel:.1%} (cancellation, unscored)")
                continue
            worst_rel = max(worst_rel, rel)
    ok &= worst_rel < 0.005
    detail = f"max rel error {worst_rel:.2%} for p>0; halving ratio {min(ratios):.2f}..{max(ratios):.2f}"
    record(7, "moment-oracle agreement", ok, "; ".join([detail, *notes]))


def test_8_sampled_statistics():
    chi_bar, shots = 0.1, 8000
    predicted = 1 / (chi_bar * np.sqrt(shots))
    ok, parts = True, []
    for scheme in SCHEMES:
        slopes = [
            spectral.average_from_slope(sweep(scheme, DEFAULTS.replace(p=0.5, mode="sampled", seed=s, chi_max=chi_bar)))
            .mean for s in range(100)
        ]
        ratio = np.std(slopes, ddof=1) / predicted
        ok &= 1 / 1.5 <= ratio <= 1.5
        parts.append(f"{scheme.value}: spread/prediction {ratio:.2f}")
    record(8, "sampled-mode statistics", ok, "; ".join(parts))


def test_9_performance():
    start = time.perf_counter()
    for scheme in SCHEMES:
        sweep(scheme, DEFAULTS.replace(p=0.5))
    elapsed = time.perf_counter() - start
    record(9, "performance", elapsed < 10.0, f"3 x 1001 exact points in {elapsed:.2f} s")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
