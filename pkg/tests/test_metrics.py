import math

import numpy as np
import pytest
from scipy.stats import unitary_group

from shared.harness.oracles import random_density, werner_state
from shared.metrics.concurrence import (
    concurrence,
    concurrence_advantage,
    eigen_lambdas,
    reference_concurrence,
    singular_value_lambdas,
)
from shared.metrics.fidelity import fidelity_with_pure, ghz_orbit_fidelity, ghz_state
from shared.qsim.states import DensityMatrix, NoiseKind, NoiseSpec, PureState, StateError

BELL = PureState.from_vector([1, 0, 0, 1], normalize=True)


# ── Concurrence ──────────────────────────────────────────────

def test_bell_and_product_states():
    assert concurrence(BELL).value == pytest.approx(1.0, abs=1e-12)
    assert concurrence(BELL.to_density()).value == pytest.approx(1.0, abs=1e-10)
    product = PureState.product([1, 0], [1, 1])
    assert concurrence(product).value == pytest.approx(0.0, abs=1e-12)
    assert concurrence(product.to_density()).value == pytest.approx(0.0, abs=1e-7)


def test_pure_and_density_paths_agree():
    rng = np.random.default_rng(21)
    for _ in range(50):
        psi = PureState.from_vector(rng.normal(size=4) + 1j * rng.normal(size=4), normalize=True)
        assert concurrence(psi.to_density()).value == pytest.approx(concurrence(psi).value, abs=1e-7)


def test_maximally_mixed_has_no_entanglement():
    report = concurrence(DensityMatrix.maximally_mixed(2))
    assert report.value == 0.0
    assert report.lambdas == pytest.approx((0.25, 0.25, 0.25, 0.25), abs=1e-12)


@pytest.mark.parametrize("w", np.linspace(0, 1, 11))
def test_werner_state(w):
    assert concurrence(werner_state(w)).value == pytest.approx(max(0.0, (3 * w - 1) / 2), abs=1e-10)


def test_local_unitary_invariance():
    rng = np.random.default_rng(22)
    for _ in range(200):
        rho = random_density(rng, 2)
        u = np.kron(unitary_group.rvs(2, random_state=rng), unitary_group.rvs(2, random_state=rng))
        rotated = DensityMatrix(2, u @ rho.elements @ u.conj().T)
        assert abs(concurrence(rho).value - concurrence(rotated).value) < 1e-10


def test_eigen_and_singular_value_lambdas_agree():
    rng = np.random.default_rng(23)
    for _ in range(500):
        rho = random_density(rng, 2).elements
        assert np.allclose(eigen_lambdas(rho), singular_value_lambdas(rho), atol=1e-9)


def test_lambdas_are_sorted_and_value_in_unit_interval():
    rng = np.random.default_rng(24)
    for _ in range(100):
        report = concurrence(random_density(rng, 2))
        assert list(report.lambdas) == sorted(report.lambdas, reverse=True)
        assert 0.0 <= report.value <= 1.0


def test_concurrence_needs_two_qubits():
    with pytest.raises(StateError, match="2-qubit"):
        concurrence(PureState.basis("000"))


# ── Reference and advantage ──────────────────────────────────

@pytest.mark.parametrize("phi", [0.0, 0.2 * math.pi, 0.5 * math.pi, 0.8 * math.pi, math.pi, -0.6 * math.pi])
def test_noiseless_reference_is_sin_half_phi(phi):
    assert reference_concurrence(phi, NoiseSpec.noiseless()) == pytest.approx(abs(math.sin(phi / 2)), abs=1e-12)


def test_noise_lowers_reference():
    clean = reference_concurrence(0.8 * math.pi, NoiseSpec.noiseless())
    for kind in NoiseKind:
        assert reference_concurrence(0.8 * math.pi, NoiseSpec(kind, 0.05)) < clean


def test_concurrence_advantage():
    assert concurrence_advantage(0.7, 0.7) == 0.0
    assert concurrence_advantage(0.6, 0.8) == pytest.approx(-0.2)
    with pytest.raises(ValueError, match="outside"):
        concurrence_advantage(1.2, 0.5)
    with pytest.raises(ValueError, match="reference"):
        concurrence_advantage(0.5, -0.1)


# ── Fidelity ─────────────────────────────────────────────────

def test_ghz_state_layout():
    ghz = ghz_state(3, sign=-1)
    assert ghz.amplitudes[0] == pytest.approx(1 / math.sqrt(2))
    assert ghz.amplitudes[7] == pytest.approx(-1 / math.sqrt(2))
    with pytest.raises(StateError):
        ghz_state(0)


def test_fidelity_pure_and_mixed():
    assert fidelity_with_pure(BELL, ghz_state(2)) == pytest.approx(1.0, abs=1e-14)
    assert fidelity_with_pure(BELL, ghz_state(2, -1)) == pytest.approx(0.0, abs=1e-14)
    assert fidelity_with_pure(DensityMatrix.maximally_mixed(2), BELL) == pytest.approx(0.25)


def test_orbit_fidelity_accepts_either_sign():
    minus = ghz_state(4, -1)
    assert fidelity_with_pure(minus, ghz_state(4)) == pytest.approx(0.0, abs=1e-14)
    assert ghz_orbit_fidelity(minus) == pytest.approx(1.0, abs=1e-14)


def test_fidelity_dimension_mismatch():
    with pytest.raises(StateError, match="Dimension mismatch"):
        fidelity_with_pure(BELL, ghz_state(3))
