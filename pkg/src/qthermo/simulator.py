"""
Dense pure-state simulator for registers of up to four qubits.

States are plain complex numpy vectors of length ``2**n``.  Qubit 0 is the
most significant bit of the flat index, so the amplitude of ``|q0 q1 q2 q3>``
sits at ``q0*8 + q1*4 + q2*2 + q3``.  This matches the ket ordering used for
two-qubit matrices: a gate on qubits ``(a, b)`` is written in the basis
``|00>, |01>, |10>, |11>`` of ``|q_a q_b>``.

The fixed register layout is

=========  =====
role       index
=========  =====
system     0
detector   1
env1       2
env2       3
=========  =====
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, SimulationError

MAX_QUBITS = 4
NORM_TOL = 1e-12


@dataclass(frozen=True)
class QubitLayout:
    system: int = 0
    detector: int = 1
    env1: int = 2
    env2: int = 3

    def __post_init__(self):
        idx = (self.system, self.detector, self.env1, self.env2)
        if len(set(idx)) != 4 or min(idx) < 0 or max(idx) >= MAX_QUBITS:
            raise ConfigError(f"invalid qubit layout {idx}", field="layout")


LAYOUT = QubitLayout()


def n_qubits(state):
    n = int(np.log2(state.shape[0]))
    if 2**n != state.shape[0]:
        raise SimulationError(f"state length {state.shape[0]} is not a power of two")
    return n


def new_state(n):
    """Return ``|0...0>`` on ``n`` qubits (1 <= n <= 4)."""
    if not 1 <= n <= MAX_QUBITS:
        raise ConfigError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n}", field="n_qubits")
    state = np.zeros(2**n, dtype=complex)
    state[0] = 1.0
    return state


def product_state(*qubit_states):
    """Tensor product of single-qubit vectors, qubit 0 first."""
    out = np.ones(1, dtype=complex)
    for q in qubit_states:
        out = np.kron(out, np.asarray(q, dtype=complex))
    return out


def apply_gate(state, gate):
    """Apply ``gate`` (a :class:`~qthermo.gates.GateOp`) and return a new state."""
    n = n_qubits(state)
    qubits = gate.qubits
    if any(q < 0 or q >= n for q in qubits):
        raise SimulationError(f"{gate.kind} acts on {qubits}, register has {n} qubits")
    k = len(qubits)
    psi = state.reshape((2,) * n)
    u = gate.matrix.reshape((2,) * (2 * k))
    # contract the gate's input axes with the target axes, then restore order
    psi = np.tensordot(u, psi, axes=(list(range(k, 2 * k)), list(qubits)))
    psi = np.moveaxis(psi, list(range(k)), list(qubits))
    return psi.reshape(-1)


def run_circuit(state, circuit):
    for gate in circuit:
        state = apply_gate(state, gate)
    return state


def reduced_density(state, keep):
    """Partial trace of ``|psi><psi|`` onto the qubits in ``keep``.

    The returned matrix uses the order given by ``keep``.
    """
    n = n_qubits(state)
    keep = list(keep)
    if not keep:
        raise ConfigError("keep list is empty", field="keep")
    if len(set(keep)) != len(keep):
        raise ConfigError(f"duplicate indices in keep list {keep}", field="keep")
    if any(q < 0 or q >= n for q in keep):
        raise ConfigError(f"keep indices {keep} out of range for {n} qubits", field="keep")
    traced = [q for q in range(n) if q not in keep]
    psi = np.transpose(state.reshape((2,) * n), keep + traced).reshape(2 ** len(keep), -1)
    return psi @ psi.conj().T


def measure_probs(state, qubit):
    """Computational-basis marginal ``(p0, p1)`` of one qubit."""
    n = n_qubits(state)
    if not 0 <= qubit < n:
        raise ConfigError(f"qubit {qubit} out of range for {n} qubits", field="qubit")
    psi = np.moveaxis(state.reshape((2,) * n), qubit, 0).reshape(2, -1)
    p0, p1 = np.sum(np.abs(psi) ** 2, axis=1)
    total = p0 + p1
    return float(p0 / total), float(p1 / total)


def rng_stream(seed, *key):
    """Independent generator for the substream labelled by ``key``.

    Substreams are derived as ``SeedSequence([seed, *key])``; callers use
    ``key = (scheme_index, chi_index, readout_index)``.  The same key always
    yields the same draws whatever order the substreams are consumed in.
    """
    if seed < 0 or any(k < 0 for k in key):
        raise ConfigError("seed and substream keys must be non-negative", field="seed")
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, key)]))


def sample_counts(p0, shots, rng):
    """Draw ``(n0, n1)`` from a binomial with ``shots`` trials."""
    if shots < 1:
        raise ConfigError(f"shots must be >= 1, got {shots}", field="shots")
    if not -NORM_TOL <= p0 <= 1 + NORM_TOL:
        raise ConfigError(f"p0 must lie in [0, 1], got {p0}", field="p0")
    n0 = int(rng.binomial(shots, min(max(p0, 0.0), 1.0)))
    return n0, shots - n0
