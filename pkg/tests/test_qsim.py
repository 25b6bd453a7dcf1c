import math

import numpy as np
import pytest

from shared.harness.oracles import random_density
from shared.qsim.channels import apply_channel, kraus_operators
from shared.qsim.ops import (
    H,
    I2,
    X,
    Z,
    apply_controlled_phase,
    apply_single_qubit_gate,
    discard_qubit,
    measure_qubit,
    phase_gate,
    reduced_density,
    rz,
)
from shared.qsim.states import (
    DensityMatrix,
    MeasurementBasis,
    NoiseKind,
    NoiseSpec,
    PureState,
    StateError,
)
from shared.wgs.builder import build_uniform_chain
from shared.wgs.graph import ChainSpec

PLUS = np.array([1, 1]) / np.sqrt(2)
ZERO = np.array([1, 0])
ONE = np.array([0, 1])


def random_pure(rng, num_qubits):
    dim = 1 << num_qubits
    return PureState.from_vector(rng.normal(size=dim) + 1j * rng.normal(size=dim), normalize=True)


def random_basis(rng):
    return MeasurementBasis(float(rng.uniform(0, math.pi)), float(rng.uniform(0, 2 * math.pi)))


# ── States ───────────────────────────────────────────────────

def test_pure_state_rejects_unnormalized_vector():
    with pytest.raises(StateError, match="not normalized"):
        PureState(1, np.array([1.0, 1.0]))


def test_pure_state_rejects_wrong_length():
    with pytest.raises(StateError, match="Expected 4 amplitudes"):
        PureState(2, np.array([1.0, 0.0]))


def test_pure_state_is_read_only():
    psi = PureState.basis("01")
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 1.0


def test_basis_bits_are_listed_from_qubit_one():
    # qubit 1 = 1, qubit 2 = 0 -> index 1
    assert PureState.basis("10").amplitudes[1] == 1.0
    assert PureState.product(ONE, ZERO).amplitudes[1] == 1.0


@pytest.mark.parametrize(
    "matrix, message",
    [
        (np.array([[0.5, 0.1], [0.2, 0.5]]), "not Hermitian"),
        (np.eye(2), "trace"),
        (np.diag([1.5, -0.5]), "not PSD"),
    ],
)
def test_density_matrix_validation(matrix, message):
    with pytest.raises(StateError, match=message):
        DensityMatrix.from_matrix(matrix)


def test_measurement_basis_is_orthonormal():
    rng = np.random.default_rng(1)
    for _ in range(100):
        plus, minus = random_basis(rng).vectors()
        assert abs(np.vdot(plus, minus)) < 1e-14
        assert abs(np.linalg.norm(plus) - 1) < 1e-14
        assert abs(np.linalg.norm(minus) - 1) < 1e-14


def test_measurement_basis_wraps_lambda():
    a = MeasurementBasis(1.0, 0.3)
    b = MeasurementBasis(1.0, 0.3 + 2 * math.pi)
    assert b.lam == pytest.approx(a.lam, abs=1e-14)


def test_flipped_basis_swaps_outcome_labels():
    basis = MeasurementBasis(0.7, 1.9)
    flipped = basis.flipped()
    assert abs(abs(np.vdot(basis.vector(1), flipped.vector(-1))) - 1) < 1e-12
    assert abs(abs(np.vdot(basis.vector(-1), flipped.vector(1))) - 1) < 1e-12


def test_equatorial_basis_minus_vector():
    phi = 0.3 * math.pi
    minus = MeasurementBasis.equatorial(phi).vector(-1)
    expected = np.array([1, -np.exp(1j * phi)]) / np.sqrt(2)
    assert np.allclose(minus, expected, atol=1e-14)


def test_noise_spec_rejects_probability_outside_unit_interval():
    with pytest.raises(StateError):
        NoiseSpec(NoiseKind.DEPOLARIZING, 1.2)
    with pytest.raises(ValueError):
        NoiseSpec("bitflip", 0.1)


# ── Gates ────────────────────────────────────────────────────

def test_identity_gate_leaves_state_unchanged():
    psi = random_pure(np.random.default_rng(2), 3)
    out = apply_single_qubit_gate(psi, 2, I2)
    assert np.allclose(out.amplitudes, psi.amplitudes, atol=1e-15)


def test_x_flips_zero_to_one():
    out = apply_single_qubit_gate(PureState.basis("0"), 1, X)
    assert np.allclose(out.amplitudes, [0, 1])


def test_rz_phase_on_one():
    phi = 0.37
    out = apply_single_qubit_gate(PureState.basis("1"), 1, rz(phi))
    assert out.amplitudes[1] == pytest.approx(np.exp(0.5j * phi), abs=1e-15)


def test_gate_acts_on_requested_qubit_only():
    out = apply_single_qubit_gate(PureState.basis("000"), 3, X)
    assert np.allclose(out.amplitudes, PureState.basis("001").amplitudes)


def test_non_unitary_gate_is_rejected():
    with pytest.raises(StateError, match="not unitary"):
        apply_single_qubit_gate(PureState.basis("0"), 1, np.array([[1, 1], [0, 1]]))


@pytest.mark.parametrize("qubit", [0, 3])
def test_out_of_range_qubit_is_rejected(qubit):
    with pytest.raises(StateError, match="out of range"):
        apply_single_qubit_gate(PureState.basis("00"), qubit, X)


def test_controlled_phase_pi_is_cz():
    out = apply_controlled_phase(PureState.basis("11"), 1, 2, math.pi)
    assert np.allclose(out.amplitudes, -PureState.basis("11").amplitudes, atol=1e-15)


def test_controlled_phase_zero_is_identity():
    psi = random_pure(np.random.default_rng(3), 2)
    out = apply_controlled_phase(psi, 1, 2, 0.0)
    assert np.allclose(out.amplitudes, psi.amplitudes, atol=1e-15)


def test_controlled_phase_half_pi():
    out = apply_controlled_phase(PureState.product(ONE, PLUS), 1, 2, math.pi / 2)
    expected = PureState.product(ONE, np.array([1, 1j]) / np.sqrt(2))
    assert np.allclose(out.amplitudes, expected.amplitudes, atol=1e-15)


@pytest.mark.parametrize("phi", [0.3, 0.8 * math.pi, -1.7])
def test_controlled_phase_with_control_set_is_a_phase_gate(phi):
    target = random_pure(np.random.default_rng(5), 1).amplitudes
    psi = PureState.product(ONE, target)
    out = apply_controlled_phase(psi, 1, 2, phi)
    expected = apply_single_qubit_gate(psi, 2, phase_gate(phi))
    assert np.allclose(out.amplitudes, expected.amplitudes, atol=1e-15)
    # control in |0> leaves the target alone
    idle = PureState.product(ZERO, target)
    assert np.allclose(apply_controlled_phase(idle, 1, 2, phi).amplitudes, idle.amplitudes, atol=1e-15)


def test_controlled_phase_is_symmetric_and_invertible():
    rng = np.random.default_rng(4)
    psi = random_pure(rng, 3)
    a = apply_controlled_phase(psi, 1, 3, 0.9)
    b = apply_controlled_phase(psi, 3, 1, 0.9)
    assert np.allclose(a.amplitudes, b.amplitudes, atol=1e-15)
    back = apply_controlled_phase(a, 1, 3, -0.9)
    assert np.max(np.abs(back.amplitudes - psi.amplitudes)) < 1e-12


def test_controlled_phase_needs_distinct_qubits():
    with pytest.raises(StateError, match="must differ"):
        apply_controlled_phase(PureState.basis("00"), 2, 2, 1.0)


def test_gate_sequence_commutes_with_density_conversion():
    rng = np.random.default_rng(5)
    psi = random_pure(rng, 3)
    rho = psi.to_density()
    for qubit, gate in [(1, H), (2, rz(0.4)), (3, X)]:
        psi = apply_single_qubit_gate(psi, qubit, gate)
        rho = apply_single_qubit_gate(rho, qubit, gate)
    psi = apply_controlled_phase(psi, 1, 2, 1.3)
    rho = apply_controlled_phase(rho, 1, 2, 1.3)
    assert np.max(np.abs(psi.to_density().elements - rho.elements)) < 1e-12


# ── Channels ─────────────────────────────────────────────────

@pytest.mark.parametrize("kind", list(NoiseKind))
def test_kraus_sets_are_complete(kind):
    ks = kraus_operators(NoiseSpec(kind, 0.37))
    total = sum(k.conj().T @ k for k in ks)
    assert np.allclose(total, I2, atol=1e-15)


def test_zero_probability_channel_is_identity():
    rho = random_density(np.random.default_rng(6), 2)
    out = apply_channel(rho, 1, NoiseSpec(NoiseKind.DEPOLARIZING, 0.0))
    assert np.allclose(out.elements, rho.elements)


def test_depolarizing_three_quarters_is_fully_mixing():
    rho = random_density(np.random.default_rng(7), 1)
    out = apply_channel(rho, 1, NoiseSpec(NoiseKind.DEPOLARIZING, 0.75))
    assert np.allclose(out.elements, np.eye(2) / 2, atol=1e-14)


def test_depolarizing_on_zero():
    p = 0.12
    out = apply_channel(PureState.basis("0").to_density(), 1, NoiseSpec(NoiseKind.DEPOLARIZING, p))
    assert np.allclose(out.elements, np.diag([1 - 2 * p / 3, 2 * p / 3]), atol=1e-15)


def test_dephasing_shrinks_coherence():
    p = 0.1
    plus = PureState.product(PLUS).to_density()
    out = apply_channel(plus, 1, NoiseSpec(NoiseKind.DEPHASING, p))
    assert out.elements[0, 1].real == pytest.approx((1 - 2 * p) / 2, abs=1e-15)
    assert out.elements[0, 0].real == pytest.approx(0.5, abs=1e-15)


def test_channels_preserve_trace_and_positivity():
    rng = np.random.default_rng(8)
    kinds = list(NoiseKind)
    for i in range(10_000):
        rho = random_density(rng, 1)
        out = apply_channel(rho, 1, NoiseSpec(kinds[i % 2], float(rng.uniform(0, 1))))
        assert abs(np.trace(out.elements).real - 1) <= 1e-14
        assert np.linalg.eigvalsh(out.elements).min() >= -1e-10


# ── Measurement and discard ──────────────────────────────────

def test_measuring_eigenstate_is_deterministic():
    plus_branch, minus_branch = measure_qubit(PureState.product(PLUS), 1, MeasurementBasis.pauli_x())
    assert plus_branch.probability == pytest.approx(1.0, abs=1e-15)
    assert minus_branch.is_null

    plus_branch, minus_branch = measure_qubit(PureState.basis("0"), 1, MeasurementBasis.pauli_z())
    assert plus_branch.probability == pytest.approx(1.0, abs=1e-15)
    assert minus_branch.state is None


@pytest.mark.parametrize("phi", [0.2 * math.pi, 0.5 * math.pi, 0.8 * math.pi, math.pi])
def test_middle_qubit_minus_probability(phi):
    chain = build_uniform_chain(ChainSpec(1, phi))
    _, minus = measure_qubit(chain, 2, MeasurementBasis.equatorial(phi))
    assert minus.probability == pytest.approx(math.sin(phi / 2) ** 2 / 2, abs=1e-12)


def test_branch_probabilities_sum_to_one():
    rng = np.random.default_rng(9)
    for i in range(1000):
        state = random_pure(rng, 3) if i % 2 else random_density(rng, 2)
        qubit = int(rng.integers(1, state.num_qubits + 1))
        plus, minus = measure_qubit(state, qubit, random_basis(rng))
        assert abs(plus.probability + minus.probability - 1) <= 1e-12


def test_discard_product_qubit():
    state = PureState.product(ZERO, PLUS, ONE)
    rest = discard_qubit(state, 2)
    expected = PureState.product(ZERO, ONE)
    assert rest.num_qubits == 2
    assert abs(np.vdot(expected.amplitudes, rest.amplitudes)) == pytest.approx(1.0, abs=1e-12)


def test_discard_entangled_qubit_raises():
    bell = PureState.from_vector([1, 0, 0, 1], normalize=True)
    with pytest.raises(StateError, match="entangled"):
        discard_qubit(bell, 1)


def test_discard_after_measurement_on_density_matrix():
    rng = np.random.default_rng(10)
    rho = random_density(rng, 3)
    _, minus = measure_qubit(rho, 2, MeasurementBasis.equatorial(0.4))
    rest = discard_qubit(minus.state, 2)
    assert rest.num_qubits == 2
    assert np.allclose(rest.elements, reduced_density(minus.state, [1, 3]), atol=1e-12)
