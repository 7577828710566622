"""
From QCGF tables to quasi-probability densities, peak weights and averages.

Transform convention: ``P(F) = (1/2pi) int dchi G(chi) exp(-i chi F)``, so a
component ``exp(i chi E)`` of ``G`` becomes a peak at ``F = E`` and
``int F P(F) dF = -i G'(0)``.

The sum over the truncated grid can be weighted by a taper.  With
``taper="none"`` the kernel is the Dirichlet kernel, whose side lobes reach
-22% of the peak height right next to every peak.  The default
``taper="fejer"`` uses triangular weights ``1 - |k| / (K + 1)``.  The
resulting Fejer kernel is non-negative, so a density with only
non-negative peak weights stays non-negative up to rounding, and negative
excursions point to negative quasi-probabilities rather than truncation
artefacts.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import AnalysisError
from .protocol import SchemeKind, derivative_probe, sweep

F_GRID = np.round(np.linspace(-2.5, 2.5, 1001), 12)
PEAK_ENERGIES = np.arange(-4, 5) / 2
FLOOR_WINDOW = (2.2, 2.5)
TAPERS = ("fejer", "none")
LINEAR_REGIME = 0.5


@dataclass(frozen=True, eq=False)
class QpdfTable:
    energies: np.ndarray
    density: np.ndarray
    scheme: SchemeKind
    taper: str = "fejer"
    imag_residue: float = 0.0

    @property
    def df(self):
        return float(self.energies[1] - self.energies[0])

    def total(self):
        """Trapezoidal integral of the density over the stored window."""
        return float(np.trapezoid(self.density, self.energies))

    def mean(self):
        """Trapezoidal first moment ``int F P(F) dF`` over the stored window."""
        return float(np.trapezoid(self.energies * self.density, self.energies))


@dataclass(frozen=True, eq=False)
class PeakTable:
    energies: np.ndarray
    weights: np.ndarray
    norm: float
    renormalized: bool = False

    def weight(self, energy):
        k = int(np.argmin(np.abs(self.energies - energy)))
        if abs(self.energies[k] - energy) > 1e-12:
            raise KeyError(energy)
        return float(self.weights[k])

    def as_dict(self):
        return {
            "energies": self.energies.tolist(),
            "weights": self.weights.tolist(),
            "norm": self.norm,
            "renormalized": self.renormalized,
        }


@dataclass(frozen=True)
class MomentReport:
    mean: float
    stderr: float
    method: str
    config: object = field(default=None, compare=False, repr=False)

    def as_dict(self):
        return {"mean": self.mean, "stderr": self.stderr, "method": self.method}


@dataclass(frozen=True)
class NegativityReport:
    min_density: float
    floor: float
    regions: list

    @property
    def negative(self):
        return bool(self.regions)


@dataclass(frozen=True)
class ConservationReport:
    du: float
    w: float
    q: float
    residual: float
    stderr: float

    def as_dict(self):
        return {"du": self.du, "w": self.w, "q": self.q, "residual": self.residual, "stderr": self.stderr}


def _taper_weights(table, taper):
    if taper not in TAPERS:
        raise AnalysisError(f"unknown taper {taper!r}; expected one of {TAPERS}")
    k = np.rint(table.grid / table.dchi)
    if taper == "none":
        return np.ones_like(k)
    return 1 - np.abs(k) / (np.max(np.abs(k)) + 1)


def _check_grid(table):
    if len(table.grid) < 3 or len(table.grid) % 2 == 0:
        raise AnalysisError(f"need an odd symmetric grid of at least 3 points, got {len(table.grid)}")
    if not np.allclose(table.grid, -table.grid[::-1], atol=1e-9 * table.dchi):
        raise AnalysisError("chi grid is not symmetric about zero")


def _projection(table, energies, taper):
    c = _taper_weights(table, taper)
    phases = np.exp(-1j * np.outer(energies, table.grid))
    return phases @ (c * table.values), c


def qpdf(table, energies=None, taper="fejer"):
    """Quasi-probability density of ``table`` on ``energies`` (default ``[-2.5, 2.5]``, step 0.005)."""
    _check_grid(table)
    energies = F_GRID if energies is None else np.asarray(energies, dtype=float)
    if energies.size == 0:
        raise AnalysisError("empty energy grid")
    s, _ = _projection(table, energies, taper)
    s = s * table.dchi / (2 * np.pi)
    return QpdfTable(energies, s.real, table.scheme, taper, float(np.max(np.abs(s.imag))))


def peak_weights(table, energies=PEAK_ENERGIES, taper="fejer"):
    """Weights of the discrete exchanges at ``energies``.

    ``w(E)`` is the transform evaluated at ``E`` divided by the kernel height,
    i.e. ``Re[sum_k c_k G_k exp(-i chi_k E)] / sum_k c_k``.  With
    ``taper="none"`` this is the plain average over the grid.
    """
    _check_grid(table)
    energies = np.asarray(energies, dtype=float)
    s, c = _projection(table, energies, taper)
    w = s.real / np.sum(c)
    return PeakTable(energies, w, float(np.sum(w)))


def renormalize_peaks(peaks):
    if abs(peaks.norm) < 1e-12:
        raise AnalysisError("peak weights sum to zero; cannot renormalize")
    w = peaks.weights / peaks.norm
    return PeakTable(peaks.energies, w, float(np.sum(w)), renormalized=True)


def _stderr(config, chi_bar):
    if config is None or config.mode == "exact":
        return 0.0
    return 1.0 / (abs(chi_bar) * np.sqrt(config.shots))


def average_from_slope(table, chi_bar=None):
    """Mean as the slope ``Im G(chi_bar) / chi_bar`` of the linearised QCGF.

    The error is ``delta / chi_bar`` with ``delta = 1 / sqrt(shots)`` for
    sampled tables and zero for exact ones.
    """
    chi_bar = table.dchi if chi_bar is None else chi_bar
    if chi_bar == 0:
        raise AnalysisError("chi_bar must be non-zero")
    if abs(chi_bar) > LINEAR_REGIME:
        raise AnalysisError(f"chi_bar={chi_bar} is outside the linear regime |chi| <= {LINEAR_REGIME}")
    try:
        g = table.value_at(chi_bar)
    except KeyError:
        raise AnalysisError(f"chi_bar={chi_bar} is not on the table grid") from None
    return MomentReport(float(g.imag / chi_bar), _stderr(table.config, chi_bar), "slope", table.config)


def average_from_derivative(table):
    """Central difference ``-i [G(h) - G(-h)] / 2h`` at the innermost grid step."""
    if len(table.grid) < 3:
        raise AnalysisError("need at least 3 grid points for a central difference")
    i0, h = table.zero_index, table.dchi
    d = (table.values[i0 + 1] - table.values[i0 - 1]) / (2 * h)
    return MomentReport(float(d.imag), _stderr(table.config, h), "derivative", table.config)


def average_from_peaks(peaks):
    """``sum_E E w(E)`` over renormalized peak weights."""
    if not peaks.renormalized:
        peaks = renormalize_peaks(peaks)
    return MomentReport(float(np.dot(peaks.energies, peaks.weights)), 0.0, "peaks")


def ringing_floor(qpdf_table, window=FLOOR_WINDOW):
    """Largest ``|P(F)|`` for ``window[0] <= |F| <= window[1]``, a range holding no peak."""
    f = np.abs(qpdf_table.energies)
    mask = (f >= window[0]) & (f <= window[1])
    if not mask.any():
        raise AnalysisError(f"energy grid does not cover the floor window {window}")
    return float(np.max(np.abs(qpdf_table.density[mask])))


def negativity(qpdf_table, window=FLOOR_WINDOW):
    """Global minimum and the maximal intervals where ``P(F) < -floor``."""
    floor = ringing_floor(qpdf_table, window)
    below = qpdf_table.density < -floor
    regions = []
    f = qpdf_table.energies
    edges = np.flatnonzero(np.diff(np.concatenate([[0], below.astype(int), [0]])))
    for start, stop in zip(edges[::2], edges[1::2]):
        regions.append((float(f[start]), float(f[stop - 1])))
    return NegativityReport(float(np.min(qpdf_table.density)), floor, regions)


def conservation_check(du, w, q):
    """Residual ``<dU> + <Q> - <W>`` with the root-sum-square error."""
    configs = [r.config for r in (du, w, q) if r.config is not None]
    if any(c != configs[0] for c in configs[1:]):
        raise AnalysisError("moment reports come from different configurations")
    residual = du.mean + q.mean - w.mean
    stderr = float(np.sqrt(du.stderr**2 + w.stderr**2 + q.stderr**2))
    return ConservationReport(du.mean, w.mean, q.mean, float(residual), stderr)


def scheme_average(scheme, cfg, step=1e-5):
    """Best pipeline estimate of one scheme's mean.

    Exact mode differentiates a three-point table with a tiny ``step``;
    sampled mode uses the slope at ``chi_bar = dchi``, which only needs the
    first grid point (the same substream as in a full sweep).
    """
    if cfg.mode == "exact":
        return average_from_derivative(derivative_probe(scheme, cfg, step))
    small = sweep(scheme, cfg.replace(chi_max=cfg.dchi))
    return average_from_slope(small, cfg.dchi)


def pipeline_averages(cfg):
    """``{'du', 'w', 'q'}`` moment reports plus their conservation check."""
    reports = {s.value: scheme_average(s, cfg) for s in SchemeKind}
    return reports, conservation_check(reports["du"], reports["w"], reports["q"])
