"""
shared/qsim/states.py

Value types for the dense simulator:
  - PureState         amplitude vector over N qubits (noiseless path)
  - DensityMatrix     2^N x 2^N operator (noisy path)
  - MeasurementBasis  single-qubit projective basis (theta, lam)
  - NoiseSpec         single-qubit channel kind + probability

Qubits are numbered 1..N. Qubit 1 is the least-significant bit of the
amplitude index, so qubit q lives on tensor axis N - q once the vector is
reshaped to (2,) * N.

All states are immutable: the arrays are flagged read-only and every
operation in shared.qsim.ops returns a new state.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

MAX_QUBITS = 12

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
BASIS_TOL = 1e-14


class StateError(ValueError):
    """Raised when a state, index or gate violates a simulator invariant."""


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


def _num_qubits_for(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 1 or (1 << n) != dim:
        raise StateError(f"Dimension {dim} is not a power of two")
    return n


@dataclass(frozen=True, eq=False)
class PureState:
    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes).reshape(-1)
        object.__setattr__(self, "amplitudes", amps)
        if not 0 <= self.num_qubits <= MAX_QUBITS:
            raise StateError(f"num_qubits must be in [0, {MAX_QUBITS}], got {self.num_qubits}")
        if amps.shape[0] != 1 << self.num_qubits:
            raise StateError(
                f"Expected {1 << self.num_qubits} amplitudes for {self.num_qubits} qubits, "
                f"got {amps.shape[0]}"
            )
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise StateError(f"State is not normalized (|psi|^2 = {norm:.15g})")

    @classmethod
    def from_vector(cls, vector, normalize: bool = False) -> "PureState":
        vec = np.asarray(vector, dtype=np.complex128).reshape(-1)
        if normalize:
            vec = vec / np.linalg.norm(vec)
        return cls(_num_qubits_for(vec.shape[0]), vec)

    @classmethod
    def basis(cls, bits: str) -> "PureState":
        """Computational basis state; bits[0] is qubit 1."""
        n = len(bits)
        vec = np.zeros(1 << n, dtype=np.complex128)
        vec[sum(int(b) << i for i, b in enumerate(bits))] = 1.0
        return cls(n, vec)

    @classmethod
    def product(cls, *single_qubit_vectors) -> "PureState":
        """Tensor product; the first argument is qubit 1."""
        vec = np.ones(1, dtype=np.complex128)
        for v in single_qubit_vectors:
            vec = np.kron(np.asarray(v, dtype=np.complex128), vec)
        return cls.from_vector(vec, normalize=True)

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix(self.num_qubits, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    num_qubits: int
    elements: np.ndarray

    def __post_init__(self):
        rho = _frozen(self.elements)
        object.__setattr__(self, "elements", rho)
        if not 0 <= self.num_qubits <= MAX_QUBITS:
            raise StateError(f"num_qubits must be in [0, {MAX_QUBITS}], got {self.num_qubits}")
        dim = 1 << self.num_qubits
        if rho.shape != (dim, dim):
            raise StateError(f"Expected shape ({dim}, {dim}), got {rho.shape}")
        herm_dev = float(np.max(np.abs(rho - rho.conj().T))) if dim else 0.0
        if herm_dev > HERMITIAN_TOL:
            raise StateError(f"Density matrix is not Hermitian (max deviation {herm_dev:.3g})")
        trace = complex(np.trace(rho))
        if abs(trace - 1.0) > TRACE_TOL:
            raise StateError(f"Density matrix trace is {trace.real:.15g}, expected 1")
        min_eig = float(np.linalg.eigvalsh(rho).min())
        if min_eig < -PSD_TOL:
            raise StateError(f"Density matrix is not PSD (min eigenvalue {min_eig:.3g})")

    @classmethod
    def from_matrix(cls, matrix) -> "DensityMatrix":
        rho = np.asarray(matrix, dtype=np.complex128)
        return cls(_num_qubits_for(rho.shape[0]), rho)

    @classmethod
    def maximally_mixed(cls, num_qubits: int) -> "DensityMatrix":
        dim = 1 << num_qubits
        return cls(num_qubits, np.eye(dim, dtype=np.complex128) / dim)

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    def tensor(self) -> np.ndarray:
        return self.elements.reshape((2,) * (2 * self.num_qubits))

    def to_density(self) -> "DensityMatrix":
        return self

    def purity(self) -> float:
        return float(np.real(np.trace(self.elements @ self.elements)))


State = Union[PureState, DensityMatrix]


@dataclass(frozen=True)
class MeasurementBasis:
    """
    |m+> = cos(theta/2)|0> + e^{i lam} sin(theta/2)|1>   (outcome +1)
    |m-> = sin(theta/2)|0> - e^{i lam} cos(theta/2)|1>   (outcome -1)

    The equatorial basis of R_z(phi) X R_z(phi)^dagger is theta = pi/2, lam = phi.
    """
    theta: float
    lam: float

    def __post_init__(self):
        theta = float(self.theta)
        if not -BASIS_TOL <= theta <= math.pi + BASIS_TOL:
            raise StateError(f"theta must be in [0, pi], got {theta}")
        object.__setattr__(self, "theta", min(max(theta, 0.0), math.pi))
        object.__setattr__(self, "lam", float(self.lam) % (2 * math.pi))

    @classmethod
    def equatorial(cls, phi: float) -> "MeasurementBasis":
        return cls(math.pi / 2, phi)

    @classmethod
    def pauli_x(cls) -> "MeasurementBasis":
        return cls(math.pi / 2, 0.0)

    @classmethod
    def pauli_z(cls) -> "MeasurementBasis":
        return cls(0.0, 0.0)

    def vectors(self) -> tuple[np.ndarray, np.ndarray]:
        c, s = math.cos(self.theta / 2), math.sin(self.theta / 2)
        phase = complex(math.cos(self.lam), math.sin(self.lam))
        plus = np.array([c, phase * s], dtype=np.complex128)
        minus = np.array([s, -phase * c], dtype=np.complex128)
        return plus, minus

    def vector(self, outcome: int) -> np.ndarray:
        plus, minus = self.vectors()
        if outcome == 1:
            return plus
        if outcome == -1:
            return minus
        raise StateError(f"Outcome label must be +1 or -1, got {outcome}")

    def flipped(self) -> "MeasurementBasis":
        """Same projectors with the outcome labels swapped."""
        return MeasurementBasis(math.pi - self.theta, self.lam + math.pi)


class NoiseKind(str, enum.Enum):
    DEPOLARIZING = "depolarizing"
    DEPHASING = "dephasing"


@dataclass(frozen=True)
class NoiseSpec:
    kind: NoiseKind
    probability: float

    def __post_init__(self):
        object.__setattr__(self, "kind", NoiseKind(self.kind))
        p = float(self.probability)
        if not 0.0 <= p <= 1.0:
            raise StateError(f"Noise probability must be in [0, 1], got {p}")
        object.__setattr__(self, "probability", p)

    @classmethod
    def noiseless(cls) -> "NoiseSpec":
        return cls(NoiseKind.DEPOLARIZING, 0.0)

    @property
    def is_trivial(self) -> bool:
        return self.probability == 0.0
