"""
shared/metrics/concurrence.py

Wootters concurrence for two-qubit states.

    rho_tilde = (Y x Y) rho* (Y x Y)        (conjugate in the computational basis)
    lambda_i  = sqrt(eig(rho rho_tilde))    in nonincreasing order
    C         = max(lambda_1 - lambda_2 - lambda_3 - lambda_4, 0)

rho rho_tilde is not Hermitian and is nilpotent for product states, so its
eigenvalues are taken from the similar Hermitian matrix
sqrt(rho) rho_tilde sqrt(rho), which has the same spectrum. The singular
values of sqrt(rho) sqrt(rho_tilde) give the same lambdas and are kept as a
cross-check (singular_value_lambdas).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from shared.qsim.ops import Y
from shared.qsim.states import PSD_TOL, DensityMatrix, NoiseSpec, PureState, StateError
from shared.wgs.builder import build_noisy_state
from shared.wgs.graph import path_graph

YY = np.kron(Y, Y)

# eigenvalues of rho (and of the lambda^2 matrix) below this are numerical zeros
EIG_FLOOR = 1e-15


@dataclass(frozen=True)
class ConcurrenceReport:
    value: float
    lambdas: tuple[float, float, float, float]


def spin_flip(rho: np.ndarray) -> np.ndarray:
    return YY @ np.conj(rho) @ YY


def _sorted_desc(values: np.ndarray) -> np.ndarray:
    order = np.argsort(-values, axis=-1, kind="stable")
    return np.take_along_axis(values, order, axis=-1)


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Batched square root of Hermitian PSD matrices."""
    herm = 0.5 * (m + np.conj(np.swapaxes(m, -1, -2)))
    w, v = np.linalg.eigh(herm)
    w = np.where(w > EIG_FLOOR, w, 0.0)
    return (v * np.sqrt(w)[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def eigen_lambdas(rho: np.ndarray) -> np.ndarray:
    """Batched over leading axes: (..., 4, 4) -> (..., 4)."""
    root = _psd_sqrt(rho)
    m = root @ spin_flip(rho) @ root
    evals = np.linalg.eigvalsh(0.5 * (m + np.conj(np.swapaxes(m, -1, -2))))
    evals = np.where(evals > EIG_FLOOR, evals, 0.0)
    return _sorted_desc(np.sqrt(evals))


def singular_value_lambdas(rho: np.ndarray) -> np.ndarray:
    sv = np.linalg.svd(_psd_sqrt(rho) @ _psd_sqrt(spin_flip(rho)), compute_uv=False)
    return _sorted_desc(sv)


def concurrence_from_lambdas(lambdas: np.ndarray) -> np.ndarray:
    c = lambdas[..., 0] - lambdas[..., 1] - lambdas[..., 2] - lambdas[..., 3]
    return np.clip(c, 0.0, 1.0)


def pure_concurrence_values(psis: np.ndarray) -> np.ndarray:
    """
    2|a00 a11 - a01 a10| / |a|^2 for a stack of unnormalized 4-vectors
    (index = 2*b2 + b1). Zero-norm rows give 0.
    """
    norm = np.sum(np.abs(psis) ** 2, axis=-1)
    det = np.abs(psis[..., 0] * psis[..., 3] - psis[..., 1] * psis[..., 2])
    safe = np.where(norm > 0, norm, 1.0)
    return np.where(norm > 0, np.minimum(2.0 * det / safe, 1.0), 0.0)


def concurrence_values(rhos: np.ndarray) -> np.ndarray:
    """Concurrence of a stack of (already valid) 4x4 density matrices."""
    return concurrence_from_lambdas(eigen_lambdas(rhos))


def concurrence(rho: Union[DensityMatrix, PureState]) -> ConcurrenceReport:
    if rho.num_qubits != 2:
        raise StateError(f"Concurrence needs a 2-qubit state, got {rho.num_qubits} qubits")

    if isinstance(rho, PureState):
        value = float(pure_concurrence_values(rho.amplitudes))
        return ConcurrenceReport(value, (value, 0.0, 0.0, 0.0))

    m = rho.elements
    min_eig = float(np.linalg.eigvalsh(m).min())
    if min_eig < -PSD_TOL:
        raise StateError(f"Not a valid density matrix (min eigenvalue {min_eig:.3g})")
    lambdas = eigen_lambdas(m)
    return ConcurrenceReport(
        float(concurrence_from_lambdas(lambdas)),
        tuple(float(x) for x in lambdas),
    )


# ── Reference and advantage ──────────────────────────────────

def reference_concurrence(phi: float, noise: NoiseSpec) -> float:
    """Two noisy |+> qubits joined by a single CP(phi)."""
    return concurrence(build_noisy_state(path_graph([phi]), noise)).value


def concurrence_advantage(protocol_c: float, reference_c: float) -> float:
    for name, value in (("protocol", protocol_c), ("reference", reference_c)):
        if not -1e-12 <= value <= 1.0 + 1e-12:
            raise ValueError(f"{name} concurrence {value} outside [0, 1]")
    return protocol_c - reference_c
