"""
Detection schemes for internal-energy change, work and heat.

Energy convention
-----------------
The engineered environment relaxes the system towards ``|0>`` (Z segment)
and ``|+>`` (X segment), so those are the ground states.  The system energy
operators are therefore ``h_x = -sigma_x / 2`` for the first segment and
``h_z = -sigma_z / 2`` after the quench, in units of the gap (``eps = 1``).
With this choice heat flows only into the cold environment and the
environment quanta equal the heat released by the system.

Coupling
--------
An impulsive coupling of strength ``chi`` is
``U(s chi, B) = exp(i s chi h_B (x) Sigma_z / 2)`` with detector Hamiltonian
``Sigma_z / 2``.  In terms of :func:`~qthermo.gates.coupling_gate` this is
``coupling_gate(B, -s, chi / 4)``.  With it the detector coherence of the
internal-energy scheme is ``G(chi) = sum_E P(E) exp(i chi E)`` with ``E`` in
units of the gap, so ``-i G'(0)`` is the mean energy change.

Operator order
--------------
Every circuit is a time-ordered list (first element acts first).  The
coherence read out is ``G = <0|rho_D|1> / (1/2)``; the detector branch
``|0>`` sees the couplings with ``+chi``.
"""

import dataclasses
import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import gates
from .errors import ConfigError
from .simulator import (
    LAYOUT,
    apply_gate,
    measure_probs,
    new_state,
    reduced_density,
    rng_stream,
    run_circuit,
    sample_counts,
)

COUPLING_SCALE = 0.25


class SchemeKind(enum.Enum):
    INTERNAL_ENERGY = "du"
    WORK = "w"
    HEAT = "q"

    @property
    def index(self):
        return list(SchemeKind).index(self)

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ConfigError(f"unknown scheme {value!r} (expected du, w or q)", field="scheme") from None


SCHEMES = tuple(SchemeKind)


@dataclass(frozen=True)
class ExperimentConfig:
    """Protocol parameters; angles in radians, energies in units of the gap."""

    theta: float = 0.7
    phi: float = 1.2
    alpha: float = 1.0
    beta: float = 0.5
    p: float = 0.0
    chi_max: float = 100.0
    dchi: float = 0.1
    shots: int = 8000
    mode: str = "exact"
    seed: int = 0

    def __post_init__(self):
        for name in ("theta", "phi", "alpha", "beta", "p", "chi_max", "dchi"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ConfigError(f"{name} must be a finite number, got {value!r}", field=name)
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"p must lie in [0, 1], got {self.p}", field="p")
        if self.chi_max <= 0:
            raise ConfigError(f"chi_max must be positive, got {self.chi_max}", field="chi_max")
        if not 0 < self.dchi <= self.chi_max:
            raise ConfigError(f"dchi must lie in (0, chi_max], got {self.dchi}", field="dchi")
        if self.mode not in ("exact", "sampled"):
            raise ConfigError(f"mode must be 'exact' or 'sampled', got {self.mode!r}", field="mode")
        if not isinstance(self.shots, int) or self.shots < 1:
            raise ConfigError(f"shots must be a positive integer, got {self.shots!r}", field="shots")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed!r}", field="seed")

    @property
    def n_positive(self):
        """Number of grid points ``chi_k = k dchi`` with ``0 <= k <= chi_max / dchi``."""
        return int(math.floor(self.chi_max / self.dchi + 1e-9)) + 1

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def as_dict(self):
        return dataclasses.asdict(self)


@dataclass(frozen=True, eq=False)
class QcgfTable:
    """``G(chi)`` on a grid symmetric about zero, ordered by increasing ``chi``."""

    grid: np.ndarray
    values: np.ndarray
    scheme: SchemeKind
    config: ExperimentConfig | None = None

    @property
    def dchi(self):
        return float(self.grid[1] - self.grid[0])

    @property
    def zero_index(self):
        return len(self.grid) // 2

    def value_at(self, chi):
        k = int(np.argmin(np.abs(self.grid - chi)))
        if abs(self.grid[k] - chi) > 1e-9 * max(1.0, abs(chi)):
            raise KeyError(chi)
        return self.values[k]


# -- circuit assembly ---------------------------------------------------------------------


def system_energy(basis):
    """Energy operator of the system while the Hamiltonian points along ``basis``."""
    return -0.5 * gates.PAULI[basis]


def couple(basis, s, chi, layout=LAYOUT):
    """Impulsive system-detector coupling ``U(s chi, basis)`` (see module notes)."""
    return gates.coupling_gate(basis, -s, COUPLING_SCALE * chi, layout.system, layout.detector)


def preparation(cfg, layout=LAYOUT):
    return [*gates.init_system(cfg.theta, cfg.phi, layout.system), gates.hadamard(layout.detector)]


def _dynamics(cfg, layout, p_x, p_z):
    p_x = cfg.p if p_x is None else p_x
    p_z = cfg.p if p_z is None else p_z
    ux = [gates.drive_x(cfg.alpha, layout.system)]
    rx = gates.relaxation_circuit(gates.ChannelSpec(p_x, "X", layout.env1, layout.system))
    uz = [gates.drive_z(cfg.beta, layout.system)]
    rz = gates.relaxation_circuit(gates.ChannelSpec(p_z, "Z", layout.env2, layout.system))
    return ux, rx, uz, rz


def build_scheme_circuit(scheme, chi, cfg, layout=LAYOUT, p_x=None, p_z=None):
    """Time-ordered circuit for one scheme at coupling ``chi``, preparation included.

    ``p_x`` / ``p_z`` override the relaxation probability of one segment.
    """
    scheme = SchemeKind.parse(scheme)
    ux, rx, uz, rz = _dynamics(cfg, layout, p_x, p_z)
    c = lambda basis, s: [couple(basis, s, chi, layout)]  # noqa: E731
    if scheme is SchemeKind.INTERNAL_ENERGY:
        body = c("X", -1) + ux + rx + uz + rz + c("Z", +1)
    elif scheme is SchemeKind.WORK:
        # couplings straddle the instantaneous quench with nothing in between
        body = ux + rx + c("X", -1) + c("Z", +1) + uz + rz
    else:
        # reversed signs: measures energy released by the system in each segment
        body = c("X", +1) + ux + rx + c("X", -1) + c("Z", +1) + uz + rz + c("Z", -1)
    return preparation(cfg, layout) + body


def dynamics_circuit(cfg, layout=LAYOUT, p_x=None, p_z=None):
    """Preparation plus the dissipative evolution, without any coupling."""
    ux, rx, uz, rz = _dynamics(cfg, layout, p_x, p_z)
    return preparation(cfg, layout) + ux + rx + uz + rz


# -- execution ----------------------------------------------------------------------------


def final_state(circuit):
    return run_circuit(new_state(4), circuit)


def run_exact(circuit, layout=LAYOUT):
    """Detector coherence ratio ``G = <0|rho_D|1> / (1/2)`` without sampling noise."""
    rho_d = reduced_density(final_state(circuit), [layout.detector])
    return complex(2 * rho_d[0, 1])


def readout_probs(state, layout=LAYOUT):
    """Detector ``p0`` after the Re and Im readout rotations."""
    out = {}
    for part in ("Re", "Im"):
        rotated = apply_gate(state, gates.readout_rotation(part, layout.detector))
        out[part] = measure_probs(rotated, layout.detector)[0]
    return out


def run_sampled(circuit, shots, rngs, layout=LAYOUT):
    """Shot-sampled estimate of ``G``.

    ``rngs`` is a ``(re_stream, im_stream)`` pair.  Each part is estimated as
    ``2 n0 / shots - 1`` from its own batch of ``shots`` detector readouts.
    """
    if shots < 1:
        raise ConfigError(f"shots must be >= 1, got {shots}", field="shots")
    p0 = readout_probs(final_state(circuit), layout)
    n0_re, _ = sample_counts(p0["Re"], shots, rngs[0])
    n0_im, _ = sample_counts(p0["Im"], shots, rngs[1])
    re = 2 * n0_re / shots - 1
    im = gates.IM_READOUT_SIGN * (2 * n0_im / shots - 1)
    return complex(re, im)


def evaluate(scheme, k, cfg, layout=LAYOUT):
    """``G`` at grid index ``k`` (``chi = k dchi``, ``k`` may be negative in exact mode)."""
    scheme = SchemeKind.parse(scheme)
    chi = k * cfg.dchi
    if cfg.mode == "exact" and k == 0:
        return 1.0 + 0.0j
    circuit = build_scheme_circuit(scheme, chi, cfg, layout)
    if cfg.mode == "exact":
        return run_exact(circuit, layout)
    rngs = tuple(rng_stream(cfg.seed, scheme.index, k, part) for part in (0, 1))
    return run_sampled(circuit, cfg.shots, rngs, layout)


def sweep(scheme, cfg, workers=None, layout=LAYOUT):
    """Evaluate ``G`` on ``0 <= chi <= chi_max`` and extend by ``G(-chi) = conj G(chi)``."""
    scheme = SchemeKind.parse(scheme)
    ks = range(cfg.n_positive)
    task = lambda k: evaluate(scheme, k, cfg, layout)  # noqa: E731
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            half = list(pool.map(task, ks))
    else:
        half = [task(k) for k in ks]
    half = np.array(half, dtype=complex)
    values = np.concatenate([half[:0:-1].conj(), half])
    kk = np.arange(-(cfg.n_positive - 1), cfg.n_positive)
    return QcgfTable(kk * cfg.dchi, values, scheme, cfg)


def derivative_probe(scheme, cfg, step=1e-5):
    """Three-point exact table ``G(-step), G(0), G(step)`` for an accurate first moment."""
    probe = cfg.replace(chi_max=step, dchi=step, mode="exact")
    return sweep(scheme, probe)


# -- direct observables -------------------------------------------------------------------


def direct_averages(cfg, layout=LAYOUT, p_x=None, p_z=None):
    """Mean energy change, heat and work from the uncoupled evolution.

    ``du`` is ``<h_z>`` at the end minus ``<h_x>`` at the start, ``q`` the
    mean number of quanta absorbed by both environment qubits, ``w = du + q``.
    """
    psi0 = final_state(preparation(cfg, layout))
    psi = final_state(dynamics_circuit(cfg, layout, p_x, p_z))
    rho0 = reduced_density(psi0, [layout.system])
    rho = reduced_density(psi, [layout.system])
    du = np.trace(rho @ system_energy("Z")).real - np.trace(rho0 @ system_energy("X")).real
    q = measure_probs(psi, layout.env1)[1] + measure_probs(psi, layout.env2)[1]
    return {"du": float(du), "q": float(q), "w": float(du + q)}
