import numpy as np
import pytest
from oracles import embed, equal_up_to_phase, random_qubit_state
from scipy.linalg import expm

from qthermo import gates
from qthermo.errors import ConfigError
from qthermo.simulator import new_state, product_state, reduced_density, run_circuit

X, Z, I2 = gates.SIGMA_X, gates.SIGMA_Z, gates.IDENTITY


def sequence_matrix(seq, n):
    m = np.eye(2**n, dtype=complex)
    for g in seq:
        m = embed(g.matrix, g.qubits, n) @ m
    return m


def test_init_system():
    assert equal_up_to_phase(run_circuit(new_state(1), gates.init_system(0.0, 0.4)), [1, 0])
    assert equal_up_to_phase(run_circuit(new_state(1), gates.init_system(np.pi, 0.0)), [0, 1])
    psi = run_circuit(new_state(1), gates.init_system(0.7, 1.2))
    assert equal_up_to_phase(psi, [np.cos(0.35), np.sin(0.35) * np.exp(1.2j)])


def test_drives_closed_form():
    assert np.allclose(gates.drive_x(0).matrix, I2)
    assert np.allclose(gates.drive_x(np.pi / 2).matrix, -1j * X)
    dx, dz = gates.drive_x(1.0).matrix, gates.drive_z(0.5).matrix
    assert np.allclose(dx, [[np.cos(1), -1j * np.sin(1)], [-1j * np.sin(1), np.cos(1)]], atol=1e-15)
    assert np.allclose(dx, expm(-1j * 1.0 * X), atol=1e-14)
    assert np.allclose(dz, expm(-1j * 0.5 * Z), atol=1e-14)


@pytest.mark.parametrize("alpha,beta", [(1.0, 0.5), (0.3, -2.1), (2.5, 0.0)])
def test_drive_decomposition_up_to_phase(alpha, beta):
    direct = gates.drive_z(beta).matrix @ gates.drive_x(alpha).matrix
    decomposed = sequence_matrix(gates.drive_decomposition(alpha, beta), 1)
    assert np.allclose(decomposed, np.exp(1j * (alpha + beta)) * direct, atol=1e-14)
    # undoubled angles do not reproduce the drive
    naive = sequence_matrix([gates.hadamard(0), gates.phase(0, alpha), gates.hadamard(0), gates.phase(0, beta)], 1)
    assert not equal_up_to_phase(naive, direct, tol=1e-6)


def test_drives_commute_with_own_axis():
    assert np.allclose(gates.drive_x(0.8).matrix @ X, X @ gates.drive_x(0.8).matrix)
    assert np.allclose(gates.drive_z(0.8).matrix @ Z, Z @ gates.drive_z(0.8).matrix)


def test_coupling_gate_examples():
    assert np.allclose(gates.coupling_gate("Z", 1, 0.0).matrix, np.eye(4))
    chi = 0.37
    m = gates.coupling_gate("Z", 1, chi).matrix
    assert np.allclose(m, np.diag(np.exp(1j * chi * np.array([1, -1, -1, 1]))))
    for basis, pauli in (("X", X), ("Z", Z)):
        for s in (1, -1):
            assert np.allclose(gates.coupling_gate(basis, s, chi).matrix, expm(1j * s * chi * np.kron(pauli, Z)))


@pytest.mark.parametrize("basis", ["X", "Z"])
@pytest.mark.parametrize("chi", [0.0, 0.4, 2.3, -1.1])
def test_coupling_decomposition(basis, chi):
    direct = gates.coupling_gate(basis, 1, chi).matrix
    seq = sequence_matrix(gates.coupling_decomposition(basis, 1, chi), 2)
    assert np.allclose(seq, np.exp(-1j * chi) * direct, atol=1e-14)


@pytest.mark.parametrize("basis", ["X", "Z"])
def test_coupling_inverse_and_additivity(basis):
    a, b = 0.3, 1.45
    plus, minus = gates.coupling_gate(basis, 1, a).matrix, gates.coupling_gate(basis, -1, a).matrix
    assert np.max(np.abs(plus @ minus - np.eye(4))) < 1e-12
    ab = gates.coupling_gate(basis, 1, a + b).matrix
    assert np.max(np.abs(plus @ gates.coupling_gate(basis, 1, b).matrix - ab)) < 1e-12


def reduced_channel(p, rho_in, basis="Z"):
    """Apply the relaxation circuit to rho_in (as a mixture of its eigenvectors) and trace out the env."""
    vals, vecs = np.linalg.eigh(rho_in)
    out = np.zeros((2, 2), dtype=complex)
    for lam, v in zip(vals, vecs.T):
        psi = run_circuit(product_state(v, [1, 0]), gates.relaxation_circuit(gates.ChannelSpec(p, basis, env=1)))
        out += lam * reduced_density(psi, [0])
    return out


def test_relaxation_examples():
    rho = np.array([[0.3, 0.2 - 0.1j], [0.2 + 0.1j, 0.7]])
    assert np.allclose(reduced_channel(0.0, rho), rho, atol=1e-14)
    psi = run_circuit(product_state([0, 1], [1, 0]), gates.relaxation_circuit(gates.ChannelSpec(1.0, env=1)))
    assert equal_up_to_phase(psi, product_state([1, 0], [0, 1]))
    out = reduced_channel(0.5, np.array([[0, 0], [0, 1]]))
    assert out[1, 1].real == pytest.approx(0.5, abs=1e-14)
    plus = np.full((2, 2), 0.5)
    assert reduced_channel(0.5, plus)[0, 1].real == pytest.approx(0.5 * np.sqrt(0.5), abs=1e-14)


def test_relaxation_rejects_bad_p():
    for p in (-0.1, 1.5, np.nan):
        with pytest.raises(ConfigError):
            gates.ChannelSpec(p)


def test_kraus_oracle_examples():
    rho = np.array([[0.6, 0.1j], [-0.1j, 0.4]])
    assert np.allclose(gates.kraus_oracle(0.0, rho), rho)
    assert np.allclose(gates.kraus_oracle(1.0, [[0, 0], [0, 1]]), [[1, 0], [0, 0]])
    with pytest.raises(ConfigError):
        gates.kraus_oracle(0.5, [[1, 0], [0, 1]])


def test_relaxation_matches_kraus_oracle_on_grid():
    rng = np.random.default_rng(11)
    for p in (0, 0.25, 0.5, 0.75, 1):
        for _ in range(10):
            v = random_qubit_state(rng)
            rho = np.outer(v, v.conj())
            assert np.max(np.abs(reduced_channel(p, rho) - gates.kraus_oracle(p, rho))) < 1e-12


def test_arctan_angle_does_not_reproduce_channel():
    p = 0.5
    theta = 2 * np.arctan(np.sqrt(1 - p))
    assert not np.isclose(np.cos(theta / 2), np.sqrt(1 - p))
    assert np.isclose(np.cos(gates.relaxation_angle(p) / 2), np.sqrt(1 - p))


def test_x_relaxation_is_hadamard_conjugate():
    rng = np.random.default_rng(5)
    h = gates.H_MATRIX
    for p in (0.2, 0.9):
        for _ in range(5):
            v = random_qubit_state(rng)
            rho = np.outer(v, v.conj())
            expected = h @ gates.kraus_oracle(p, h @ rho @ h) @ h
            assert np.max(np.abs(reduced_channel(p, rho, "X") - expected)) < 1e-12


def test_x_relaxation_targets_plus_state():
    minus = np.full((2, 2), 0.5) * np.array([[1, -1], [-1, 1]])
    assert np.allclose(reduced_channel(1.0, minus, "X"), np.full((2, 2), 0.5), atol=1e-14)


def readout_imbalance(psi, part):
    out = gates.readout_rotation(part, 0).matrix @ psi
    return abs(out[0]) ** 2 - abs(out[1]) ** 2


def test_readout_rotations():
    plus = np.array([1, 1]) / np.sqrt(2)
    plus_i = np.array([1, 1j]) / np.sqrt(2)
    assert readout_imbalance(plus, "Re") == pytest.approx(1.0)
    assert (abs(gates.readout_rotation("Re", 0).matrix @ plus_i) ** 2)[0] == pytest.approx(0.5)
    assert abs(readout_imbalance(plus_i, "Im")) == pytest.approx(1.0)
    with pytest.raises(ConfigError):
        gates.readout_rotation("Abs")


def test_im_sign_calibration_is_frozen():
    assert gates.calibrate_im_sign() == gates.IM_READOUT_SIGN


def test_readout_recovers_coherence():
    rng = np.random.default_rng(3)
    for _ in range(10):
        psi = random_qubit_state(rng)
        g = 2 * psi[0] * psi[1].conj()
        assert readout_imbalance(psi, "Re") == pytest.approx(g.real, abs=1e-12)
        assert gates.IM_READOUT_SIGN * readout_imbalance(psi, "Im") == pytest.approx(g.imag, abs=1e-12)


def test_u2_is_positive_quarter_x_rotation():
    # the IBM u2(pi/2, -pi/2) realises exp(+i pi sigma_x / 4)
    assert np.allclose(gates.u2(0, np.pi / 2, -np.pi / 2).matrix, expm(1j * np.pi / 4 * X))
