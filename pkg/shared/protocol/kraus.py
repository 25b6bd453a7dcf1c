"""
shared/protocol/kraus.py

Closed forms for the elementary step of the protocol: measuring the middle
qubit of a 3-qubit chain in M_phi = R_z(phi) X R_z(phi)^dagger.

Kraus operators act on the outer pair (qubit 1, qubit 3); the 4x4 index
is 2*b3 + b1, so |00>, |01>, |10>, |11> map to 0, 1, 2, 3.

    K+ = cos(phi/2) (e^{-i phi/2}|00><00| + e^{i phi/2}|11><11|) + |01><01| + |10><10|
    K- = i sin(phi/2) (e^{-i phi/2}|00><00| - e^{i phi/2}|11><11|)
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from shared.qsim.ops import apply_controlled_phase
from shared.qsim.states import MeasurementBasis, PureState

LINEAR_OPTICS_GHZ3_PROBABILITY = 1.0 / 32.0


@dataclass(frozen=True, eq=False)
class KrausPair:
    k_plus: np.ndarray
    k_minus: np.ndarray

    def completeness_error(self) -> float:
        total = self.k_plus.conj().T @ self.k_plus + self.k_minus.conj().T @ self.k_minus
        return float(np.max(np.abs(total - np.eye(4))))

    def operator(self, outcome: int) -> np.ndarray:
        return self.k_plus if outcome == 1 else self.k_minus


def kraus_pair(phi: float) -> KrausPair:
    c, s = math.cos(phi / 2), math.sin(phi / 2)
    lo, hi = np.exp(-0.5j * phi), np.exp(0.5j * phi)
    k_plus = np.diag([c * lo, 1.0, 1.0, c * hi]).astype(np.complex128)
    k_minus = (1j * s * np.diag([lo, 0.0, 0.0, -hi])).astype(np.complex128)
    return KrausPair(k_plus, k_minus)


def simulated_kraus_pair(phi12: float, phi23: float, basis: MeasurementBasis) -> KrausPair:
    """
    The same maps built by brute force: |a>|+>|c> -> CP12 CP23 -> <m+-| on qubit 2.
    With phi12 = phi23 = phi and basis = M_phi this equals kraus_pair(phi).
    """
    plus = np.array([1.0, 1.0]) / np.sqrt(2)
    columns = {1: np.zeros((4, 4), dtype=np.complex128), -1: np.zeros((4, 4), dtype=np.complex128)}
    for col in range(4):
        a, c = col & 1, col >> 1
        state = PureState.product(np.eye(2)[a], plus, np.eye(2)[c])
        state = apply_controlled_phase(state, 1, 2, phi12)
        state = apply_controlled_phase(state, 2, 3, phi23)
        t = state.tensor()  # axes: qubit 3, qubit 2, qubit 1
        for outcome in (1, -1):
            bra = basis.vector(outcome).conj()
            columns[outcome][:, col] = np.einsum("b,cba->ca", bra, t).reshape(4)
    return KrausPair(columns[1], columns[-1])


def success_probability(n: int, phi: float) -> float:
    """(1/2^n) |sin(phi/2)|^{2n}."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return 0.5 ** n * abs(math.sin(phi / 2)) ** (2 * n)


def linear_optics_baseline() -> float:
    """Probability of a 3-qubit GHZ state from single photons with linear optics."""
    return LINEAR_OPTICS_GHZ3_PROBABILITY


def linear_optics_crossover(n: int = 2, baseline: float = LINEAR_OPTICS_GHZ3_PROBABILITY) -> float:
    """Weight phi in [0, pi] at which success_probability(n, phi) equals the baseline."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    s = (baseline * 2 ** n) ** (1.0 / (2 * n))
    if s > 1.0:
        raise ValueError(f"success_probability({n}, phi) never reaches {baseline}")
    return 2.0 * math.asin(s)
