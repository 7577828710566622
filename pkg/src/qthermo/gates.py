"""
Primitive gates and the composite sequences used by the detection schemes.

Gate sequences are lists of :class:`GateOp` in *time order*: the first
element acts first.  Operator products written right-to-left are reversed
when turned into sequences.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, SimulationError

UNITARY_TOL = 1e-12

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)
H_MATRIX = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
CNOT_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
PAULI = {"X": SIGMA_X, "Z": SIGMA_Z}


@dataclass(frozen=True, eq=False)
class GateOp:
    """A unitary acting on ``qubits``; ``matrix`` is written in the order of ``qubits``."""

    kind: str
    qubits: tuple
    matrix: np.ndarray = field(repr=False)
    params: tuple = ()

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        dim = 2 ** len(self.qubits)
        if m.shape != (dim, dim):
            raise SimulationError(f"{self.kind}: matrix shape {m.shape} does not match {len(self.qubits)} qubits")
        if len(set(self.qubits)) != len(self.qubits):
            raise SimulationError(f"{self.kind}: repeated qubit in {self.qubits}")
        numeric = [x for x in self.params if isinstance(x, (int, float))]
        if not np.all(np.isfinite(numeric)) or not np.all(np.isfinite(m)):
            raise SimulationError(f"{self.kind}: non-finite parameters")
        if np.max(np.abs(m.conj().T @ m - np.eye(dim))) > UNITARY_TOL:
            raise SimulationError(f"{self.kind}: matrix is not unitary")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))


def hadamard(q):
    return GateOp("Hadamard", (q,), H_MATRIX)


def phase(q, theta):
    """IBM ``u1(theta) = diag(1, exp(i theta))``."""
    return GateOp("Phase", (q,), np.diag([1, np.exp(1j * theta)]), (theta,))


def u2(q, a, b):
    """IBM ``u2(a, b)``; for ``b = -a`` this is ``[[1, -e^{-ia}], [e^{ia}, 1]] / sqrt 2``."""
    m = np.array([[1, -np.exp(1j * b)], [np.exp(1j * a), np.exp(1j * (a + b))]]) / np.sqrt(2)
    return GateOp("U2", (q,), m, (a, b))


def cnot(control, target):
    return GateOp("CNOT", (control, target), CNOT_MATRIX)


def controlled_rotation(control, target, theta):
    """Rotate ``target`` by ``theta`` when ``control`` is set.

    The rotation maps ``|0> -> cos(theta/2)|0> + sin(theta/2)|1>`` and
    ``|1> -> cos(theta/2)|1> - sin(theta/2)|0>``.
    """
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    m = np.eye(4, dtype=complex)
    m[2:, 2:] = [[c, -s], [s, c]]
    return GateOp("ControlledRotation", (control, target), m, (theta,))


def single_qubit(kind, q, matrix, params=()):
    return GateOp(kind, (q,), matrix, tuple(params))


# -- system preparation and drive ---------------------------------------------------------


def init_system(theta, phi, q=0):
    """Gates taking ``|0>`` to ``cos(theta/2)|0> + sin(theta/2) e^{i phi}|1>`` (global phase ``e^{i theta/2}``)."""
    return [hadamard(q), phase(q, theta), hadamard(q), phase(q, phi + np.pi / 2)]


def drive_x(alpha, q=0):
    """``exp(-i alpha sigma_x)``."""
    c, s = np.cos(alpha), np.sin(alpha)
    return single_qubit("DriveX", q, [[c, -1j * s], [-1j * s, c]], (alpha,))


def drive_z(beta, q=0):
    """``exp(-i beta sigma_z)``."""
    return single_qubit("DriveZ", q, np.diag([np.exp(-1j * beta), np.exp(1j * beta)]), (beta,))


def drive_decomposition(alpha, beta, q=0):
    """Phase/Hadamard sequence equal to ``drive_z(beta) @ drive_x(alpha)`` up to ``e^{i(alpha+beta)}``.

    Phase-gate angles are doubled with respect to the naive ``u1(beta) H u1(alpha) H``,
    which does not reproduce the rotations.
    """
    return [hadamard(q), phase(q, 2 * alpha), hadamard(q), phase(q, 2 * beta)]


# -- system-detector coupling -------------------------------------------------------------


def coupling_gate(basis, sign, chi, system=0, detector=1):
    """``exp(i sign chi sigma_basis (x) Sigma_z)`` on ``(system, detector)``.

    For ``basis='Z'`` this is ``diag(e^{i chi}, e^{-i chi}, e^{-i chi}, e^{i chi})``
    in the ``|s d>`` basis (``sign=+1``).
    """
    if basis not in PAULI:
        raise ConfigError(f"basis must be 'X' or 'Z', got {basis!r}", field="basis")
    if sign not in (1, -1):
        raise ConfigError(f"sign must be +1 or -1, got {sign}", field="sign")
    angle = sign * chi
    generator = np.kron(PAULI[basis], SIGMA_Z)
    # generator squares to the identity, so the exponential is exact in closed form
    m = np.cos(angle) * np.eye(4) + 1j * np.sin(angle) * generator
    return GateOp("TwoQubitDiagonal", (system, detector), m, (chi, sign, basis))


def coupling_decomposition(basis, sign, chi, system=0, detector=1):
    """CNOT / phase realisation of :func:`coupling_gate`, equal up to ``e^{i sign chi}``."""
    core = [cnot(system, detector), phase(detector, -2 * sign * chi), cnot(system, detector)]
    if basis == "Z":
        return core
    if basis == "X":
        return [hadamard(system), *core, hadamard(system)]
    raise ConfigError(f"basis must be 'X' or 'Z', got {basis!r}", field="basis")


# -- engineered environment ---------------------------------------------------------------


@dataclass(frozen=True)
class ChannelSpec:
    """Cold amplitude-damping channel with relaxation probability ``p``.

    ``basis='Z'`` relaxes ``|1> -> |0>``; ``basis='X'`` relaxes ``|-> -> |+>``.
    """

    p: float
    basis: str = "Z"
    env: int = 2
    system: int = 0

    def __post_init__(self):
        if not (np.isfinite(self.p) and 0.0 <= self.p <= 1.0):
            raise ConfigError(f"p must lie in [0, 1], got {self.p}", field="p")
        if self.basis not in PAULI:
            raise ConfigError(f"basis must be 'X' or 'Z', got {self.basis!r}", field="basis")
        if self.env == self.system:
            raise ConfigError("environment and system qubits must differ", field="env")


def relaxation_angle(p):
    """Controlled-rotation angle giving amplitude ``sqrt(1-p)`` on the undecayed branch."""
    return 2 * np.arccos(np.sqrt(1 - p))


def relaxation_circuit(spec):
    """CNOT(env->sys) . CRot(sys->env) . CNOT(env->sys), Hadamard-wrapped for ``basis='X'``.

    With the environment in ``|0>`` it maps ``|1,0> -> sqrt(1-p)|1,0> + sqrt(p)|0,1>``.
    """
    s, e = spec.system, spec.env
    seq = [cnot(e, s), controlled_rotation(s, e, relaxation_angle(spec.p)), cnot(e, s)]
    if spec.basis == "X":
        seq = [hadamard(s), *seq, hadamard(s)]
    return seq


def kraus_operators(p):
    m0 = np.array([[1, 0], [0, np.sqrt(1 - p)]], dtype=complex)
    m1 = np.array([[0, np.sqrt(p)], [0, 0]], dtype=complex)
    return m0, m1


def kraus_oracle(p, rho):
    """Operator-sum form of the cold damping channel, independent of the circuit."""
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"p must lie in [0, 1], got {p}", field="p")
    rho = np.asarray(rho, dtype=complex)
    if (
        rho.shape != (2, 2)
        or np.max(np.abs(rho - rho.conj().T)) > 1e-12
        or abs(np.trace(rho) - 1) > 1e-12
        or np.min(np.linalg.eigvalsh(rho)) < -1e-10
    ):
        raise ConfigError("rho must be a valid single-qubit density matrix", field="rho")
    return sum(m @ rho @ m.conj().T for m in kraus_operators(p))


# -- detector readout ---------------------------------------------------------------------

# After the "Im" rotation, p0 - p1 = IM_READOUT_SIGN * Im G.  Frozen from calibrate_im_sign().
IM_READOUT_SIGN = 1


def readout_rotation(part, q=1):
    """Rotation applied to the detector before a computational-basis readout.

    ``"Re"`` uses a Hadamard, so ``p0 - p1 = 2 Re <0|rho|1>``.  ``"Im"`` uses
    ``u2(pi/2, -pi/2)``, so ``p0 - p1 = IM_READOUT_SIGN * 2 Im <0|rho|1>``.
    """
    if part == "Re":
        return hadamard(q)
    if part == "Im":
        return u2(q, np.pi / 2, -np.pi / 2)
    raise ConfigError(f"readout part must be 'Re' or 'Im', got {part!r}", field="part")


def calibrate_im_sign():
    """Sign relating the Im-readout population imbalance to ``2 Im <0|rho|1>``.

    Evaluated on the reference detector state ``(|0> + i|1>)/sqrt 2``.
    """
    psi = np.array([1, 1j]) / np.sqrt(2)
    coherence = psi[0] * psi[1].conj()
    out = readout_rotation("Im", 0).matrix @ psi
    imbalance = abs(out[0]) ** 2 - abs(out[1]) ** 2
    return int(np.sign(imbalance / (2 * coherence.imag)))
