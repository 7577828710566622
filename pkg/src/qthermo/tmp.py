"""
Two-measurement protocol on a three-qubit register (system, env1, env2).

The initial projective energy measurement is modelled as a classical mixture
of the two eigenstates of ``h_x = -sigma_x/2`` with Born weights, so no
initial coherence survives.  After the dissipative evolution all three qubits
are read out in the computational basis and the outcome probabilities are
enumerated exactly.
"""

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from . import gates
from .errors import ConfigError
from .simulator import product_state, run_circuit

SYSTEM, ENV1, ENV2 = 0, 1, 2
PLUS = np.array([1, 1]) / np.sqrt(2)
MINUS = np.array([1, -1]) / np.sqrt(2)
# eigenvalues of -sigma/2: |+> and |0> are the ground states
INITIAL_BRANCHES = ((PLUS, -0.5), (MINUS, +0.5))
FINAL_ENERGY = (-0.5, +0.5)


@dataclass(frozen=True)
class TmpOutcome:
    initial_energy: float
    final_energy: float
    q1: int
    q2: int
    probability: float

    @property
    def du(self):
        return self.final_energy - self.initial_energy

    @property
    def q(self):
        return self.q1 + self.q2

    @property
    def w(self):
        return self.du + self.q


@dataclass(frozen=True)
class TmpDistribution:
    outcomes: tuple

    def mass(self, quantity):
        """Probability mass function of ``'du'``, ``'q'`` or ``'w'`` as a sorted dict."""
        if quantity not in ("du", "q", "w"):
            raise ConfigError(f"unknown quantity {quantity!r}", field="quantity")
        out = defaultdict(float)
        for o in self.outcomes:
            out[getattr(o, quantity)] += o.probability
        return dict(sorted(out.items()))

    def total(self):
        return sum(o.probability for o in self.outcomes)


def initial_weights(cfg):
    """Born weights of ``|+>`` and ``|->`` in the configured initial state."""
    psi0 = np.array([np.cos(cfg.theta / 2), np.sin(cfg.theta / 2) * np.exp(1j * cfg.phi)])
    return tuple(float(abs(np.vdot(b, psi0)) ** 2) for b, _ in INITIAL_BRANCHES)


def evolution(cfg):
    return [
        gates.drive_x(cfg.alpha, SYSTEM),
        *gates.relaxation_circuit(gates.ChannelSpec(cfg.p, "X", ENV1, SYSTEM)),
        gates.drive_z(cfg.beta, SYSTEM),
        *gates.relaxation_circuit(gates.ChannelSpec(cfg.p, "Z", ENV2, SYSTEM)),
    ]


def tmp_distribution(cfg):
    """Exact joint outcome distribution; ``chi``, ``shots`` and ``mode`` are ignored."""
    circuit = evolution(cfg)
    outcomes = []
    for (branch, e0), weight in zip(INITIAL_BRANCHES, initial_weights(cfg)):
        psi = run_circuit(product_state(branch, [1, 0], [1, 0]), circuit)
        probs = np.abs(psi) ** 2
        for index, prob in enumerate(probs):
            s, q1, q2 = (index >> 2) & 1, (index >> 1) & 1, index & 1
            outcomes.append(TmpOutcome(e0, FINAL_ENERGY[s], q1, q2, float(weight * prob)))
    return TmpDistribution(tuple(outcomes))


def tmp_averages(dist):
    """Probability-weighted means ``{'du', 'q', 'w'}``."""
    return {k: float(sum(o.probability * getattr(o, k) for o in dist.outcomes)) for k in ("du", "q", "w")}


def tmp_sample(dist, shots, rng):
    """Counts per outcome from ``shots`` simulated runs (multinomial)."""
    if shots < 1:
        raise ConfigError(f"shots must be >= 1, got {shots}", field="shots")
    probs = np.array([o.probability for o in dist.outcomes])
    return rng.multinomial(shots, probs / probs.sum())
