"""
shared/qsim/ops.py

Gates, projective measurement and qubit discarding for PureState and
DensityMatrix. Every function returns a new state of the same kind.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from shared.qsim.states import (
    DensityMatrix,
    MeasurementBasis,
    PureState,
    State,
    StateError,
)

logger = logging.getLogger(__name__)

UNITARY_TOL = 1e-12
NULL_BRANCH_TOL = 1e-14
DISCARD_PURITY_TOL = 1e-10

I2 = np.eye(2, dtype=np.complex128)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
S = np.array([[1, 0], [0, 1j]], dtype=np.complex128)


def rz(angle: float) -> np.ndarray:
    """R_z(angle) = exp(-i angle Z / 2)."""
    return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])


def phase_gate(phi: float) -> np.ndarray:
    """S(phi) = diag(1, e^{i phi})."""
    return np.diag([1.0, np.exp(1j * phi)]).astype(np.complex128)


# ── Index helpers ────────────────────────────────────────────

def _check_qubit(state: State, qubit: int) -> int:
    if not 1 <= qubit <= state.num_qubits:
        raise StateError(f"Qubit index {qubit} out of range [1, {state.num_qubits}]")
    return state.num_qubits - qubit


def _bit_mask(num_qubits: int, qubit: int) -> np.ndarray:
    return (np.arange(1 << num_qubits) >> (qubit - 1)) & 1


def _apply_local(state: State, qubit: int, op: np.ndarray) -> np.ndarray:
    """op on one qubit (op rho op^dagger for density matrices); returns raw array."""
    axis = _check_qubit(state, qubit)
    n = state.num_qubits
    t = np.moveaxis(np.tensordot(op, state.tensor(), axes=([1], [axis])), 0, axis)
    if isinstance(state, PureState):
        return t.reshape(-1)
    t = np.moveaxis(np.tensordot(op.conj(), t, axes=([1], [axis + n])), 0, axis + n)
    return t.reshape(state.dim, state.dim)


def _rebuild(state: State, data: np.ndarray) -> State:
    if isinstance(state, PureState):
        return PureState(state.num_qubits, data)
    return DensityMatrix(state.num_qubits, data)


# ── Gates ────────────────────────────────────────────────────

def apply_single_qubit_gate(state: State, qubit: int, gate) -> State:
    gate = np.asarray(gate, dtype=np.complex128)
    if gate.shape != (2, 2):
        raise StateError(f"Single-qubit gate must be 2x2, got {gate.shape}")
    deviation = float(np.max(np.abs(gate.conj().T @ gate - I2)))
    if deviation > UNITARY_TOL:
        raise StateError(f"Gate is not unitary (max deviation {deviation:.3g})")
    return _rebuild(state, _apply_local(state, qubit, gate))


def controlled_phase_diagonal(num_qubits: int, control: int, target: int, phi: float) -> np.ndarray:
    both = _bit_mask(num_qubits, control) & _bit_mask(num_qubits, target)
    return np.exp(1j * phi * both)


def apply_controlled_phase(state: State, control: int, target: int, phi: float) -> State:
    _check_qubit(state, control)
    _check_qubit(state, target)
    if control == target:
        raise StateError(f"Control and target must differ (both {control})")
    diag = controlled_phase_diagonal(state.num_qubits, control, target, phi)
    if isinstance(state, PureState):
        return PureState(state.num_qubits, state.amplitudes * diag)
    return DensityMatrix(state.num_qubits, state.elements * np.outer(diag, diag.conj()))


# ── Measurement ──────────────────────────────────────────────

@dataclass(frozen=True)
class MeasurementBranch:
    outcome: int
    probability: float
    state: Optional[State]

    @property
    def is_null(self) -> bool:
        return self.state is None


def _projector(vector: np.ndarray) -> np.ndarray:
    return np.outer(vector, vector.conj())


def measure_qubit(state: State, qubit: int, basis: MeasurementBasis) -> tuple[MeasurementBranch, MeasurementBranch]:
    """
    Both branches of a projective measurement, (+1 branch, -1 branch).
    The measured qubit stays in the register, collapsed onto |m+> or |m->.
    Branches with probability below 1e-14 carry state=None.
    """
    _check_qubit(state, qubit)
    branches = []
    for outcome in (1, -1):
        projected = _apply_local(state, qubit, _projector(basis.vector(outcome)))
        if isinstance(state, PureState):
            prob = float(np.vdot(projected, projected).real)
        else:
            prob = float(np.trace(projected).real)
        prob = min(max(prob, 0.0), 1.0)
        if prob < NULL_BRANCH_TOL:
            logger.debug(f"Null branch on qubit {qubit}, outcome {outcome:+d} (p={prob:.3g})")
            branches.append(MeasurementBranch(outcome, prob, None))
            continue
        if isinstance(state, PureState):
            post = PureState(state.num_qubits, projected / np.sqrt(prob))
        else:
            post = DensityMatrix(state.num_qubits, _hermitize(projected / prob))
        branches.append(MeasurementBranch(outcome, prob, post))
    return branches[0], branches[1]


def _hermitize(rho: np.ndarray) -> np.ndarray:
    return 0.5 * (rho + rho.conj().T)


# ── Partial trace / discard ──────────────────────────────────

def reduced_density(state: State, keep: list[int]) -> np.ndarray:
    """Reduced density matrix on the given qubits (ascending order, qubit 1 = LSB)."""
    n = state.num_qubits
    keep = sorted(keep)
    for q in keep:
        _check_qubit(state, q)
    keep_axes = [n - q for q in reversed(keep)]
    drop_axes = [a for a in range(n) if a not in keep_axes]
    k = len(keep)
    if isinstance(state, PureState):
        t = np.transpose(state.tensor(), keep_axes + drop_axes).reshape(1 << k, -1)
        return t @ t.conj().T
    t = state.tensor()
    perm = keep_axes + drop_axes + [a + n for a in keep_axes] + [a + n for a in drop_axes]
    t = np.transpose(t, perm).reshape(1 << k, 1 << (n - k), 1 << k, 1 << (n - k))
    return np.einsum("ajbj->ab", t)


def discard_qubit(state: State, qubit: int) -> State:
    """
    Remove a qubit that is in a product state with the rest of the register.
    Higher-numbered qubits shift down by one.
    """
    axis = _check_qubit(state, qubit)
    n = state.num_qubits
    local = reduced_density(state, [qubit])
    purity = float(np.real(np.trace(local @ local)))
    if abs(purity - 1.0) > DISCARD_PURITY_TOL:
        raise StateError(
            f"Qubit {qubit} is entangled with the rest of the register "
            f"(reduced purity {purity:.12f}); measure it before discarding"
        )
    if isinstance(state, PureState):
        evals, evecs = np.linalg.eigh(local)
        local_vec = evecs[:, int(np.argmax(evals))]
        rest = np.tensordot(local_vec.conj(), state.tensor(), axes=([0], [axis])).reshape(-1)
        rest = rest / np.linalg.norm(rest)
        return PureState(n - 1, rest)
    t = state.tensor()
    rest = np.trace(t, axis1=axis, axis2=axis + n).reshape(1 << (n - 1), 1 << (n - 1))
    return DensityMatrix(n - 1, _hermitize(rest))
